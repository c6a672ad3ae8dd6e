#ifndef TRAPNORM_WKB_HPP
#define TRAPNORM_WKB_HPP

// WKB estimates for -psi'' + (x^{2n} - E) psi = 0 and the double well
// -s^2 psi'' + (x^2-1)^2 psi = eps psi: eigenvalue estimates, the tail
// amplitude C, log10 bounds on the Fourier transform and spatial decay of
// psi^2, and planners that turn those bounds into a QuadPlan.
//
// Everything here runs at the fixed planner precision.

#include <trapnorm/bigreal.hpp>
#include <trapnorm/errors.hpp>
#include <trapnorm/plan.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace trapnorm {

/// Slack digits added to every wavefunction plan target (dropped algebraic
/// prefactors).
inline constexpr long kPlanSlackDigits = 2;

namespace detail {

/// Bisection for g(x) = 0 on [lo, hi] with g(lo), g(hi) of opposite sign.
inline Real bisect(const std::function<Real(const Real&)>& g, Real lo, Real hi, double rel_tol = 1e-6) {
  Real g_lo = g(lo);
  Real g_hi = g(hi);
  if (g_lo.sign() * g_hi.sign() > 0) throw PlanError("bisection bracket does not straddle a root");
  Real tol(rel_tol, kPlannerDigits);
  for (int it = 0; it < 400; ++it) {
    if (abs(hi - lo) <= tol * abs(hi)) break;
    Real mid = (lo + hi) / 2L;
    Real g_mid = g(mid);
    if (g_mid.is_zero()) return mid;
    if (g_mid.sign() == g_lo.sign()) {
      lo = std::move(mid);
      g_lo = std::move(g_mid);
    } else {
      hi = std::move(mid);
    }
  }
  return (lo + hi) / 2L;
}

/// Smallest hi = start * 2^k with decreasing `g(hi) < 0`.
inline Real expand_until_negative(const std::function<Real(const Real&)>& g, Real start) {
  for (int it = 0; it < 200; ++it) {
    if (g(start) < 0L) return start;
    start *= 2L;
  }
  throw PlanError("could not bracket planner root");
}

}  // namespace detail

/// int_{-1}^{1} sqrt(1 - u^{2n}) du = Gamma(1/2n) Gamma(3/2) / (n Gamma(1/2n + 3/2)).
inline Real wkb_action_integral(int n) {
  if (n < 1) throw std::invalid_argument("potential exponent n must be >= 1");
  const Digits d = kPlannerDigits;
  Real inv = Real(1L, d) / (2L * n);
  Real three_halves = Real(3L, d) / 2L;
  return gamma(inv) * gamma(three_halves) / (gamma(inv + three_halves) * n);
}

/// WKB eigenvalue E_N = [pi (N + 1/2) / int_{-1}^{1} sqrt(1 - u^{2n}) du]^{2n/(n+1)}.
inline Real wkb_energy(int n, long N) {
  if (n < 1) throw std::invalid_argument("potential exponent n must be >= 1");
  if (N < 0) throw std::invalid_argument("state index N must be >= 0");
  const Digits d = kPlannerDigits;
  Real base = pi(d) * (Real(2L * N + 1, d) / 2L) / wkb_action_integral(n);
  return pow(base, Real(2L * n, d) / (n + 1L));
}

/// ln C = (pi/2) tan(pi/2n) (N + 1/2). Singular for n = 1.
inline Real wkb_prefactor(int n, long N) {
  if (n < 1) throw std::invalid_argument("potential exponent n must be >= 1");
  if (N < 0) throw std::invalid_argument("state index N must be >= 0");
  if (n == 1)
    throw SingularPrefactor("tail prefactor C diverges for the harmonic potential (tan(pi/2)); use harmonic_prefactor");
  const Digits d = kPlannerDigits;
  Real p = pi(d);
  return p / 2L * tan(p / (2L * n)) * (Real(2L * N + 1, d) / 2L);
}

/// ln C = B(1/2, (n-1)/2n) E^{(n+1)/2n} / (2(n+1)) for an explicit E. Singular for n = 1.
inline Real wkb_prefactor_beta(int n, const Real& E) {
  if (n < 2) throw SingularPrefactor("Beta-form prefactor requires n >= 2");
  const Digits d = kPlannerDigits;
  Real half = Real(1L, d) / 2L;
  Real y = Real(n - 1L, d) / (2L * n);
  Real beta = gamma(half) * gamma(y) / gamma(half + y);
  return beta * pow(Real(E, d), Real(n + 1L, d) / (2L * n)) / (2L * (n + 1L));
}

/// Harmonic stand-in for ln C: (E/2) acosh(x / sqrt E), the part of the exact
/// WKB exponent that the n >= 2 closed form absorbs into C.
inline Real harmonic_prefactor(const Real& E, const Real& x) {
  const Digits d = kPlannerDigits;
  Real ratio = Real(x, d) / sqrt(Real(E, d));
  if (!(ratio > 1L)) return Real(0L, d);
  return Real(E, d) / 2L * acosh(ratio);
}

/// log10 of the bound C^2 exp{-(n/(n+1)) sin(pi/2n) p [(p/2)^2 - E]^{1/2n}} on
/// the Fourier transform of psi^2 at p.
inline Real fourier_tail(int n, const Real& E, const Real& c_log, const Real& p) {
  const Digits d = kPlannerDigits;
  Real excess = square(Real(p, d) / 2L) - Real(E, d);
  if (!(excess > 0L)) throw StepTooCoarse("h too coarse for this E: need (p/2)^2 > E with p = 2 pi / h");
  Real decay = Real(n, d) / (n + 1L) * sin(pi(d) / (2L * n)) * Real(p, d) * pow(excess, Real(1L, d) / (2L * n));
  return (Real(c_log, d) * 2L - decay) / ln10(d);
}

/// log10 of the bound C^2 exp{-(2/(n+1)) x sqrt(x^{2n} - E)} on psi(x)^2.
inline Real spatial_tail(int n, const Real& E, const Real& c_log, const Real& x) {
  const Digits d = kPlannerDigits;
  Real excess = pow(Real(x, d), 2L * n) - Real(E, d);
  if (!(excess > 0L)) throw BelowTurningPoint("x_max below turning point: need x^{2n} > E");
  Real decay = Real(2L, d) / (n + 1L) * Real(x, d) * sqrt(excess);
  return (Real(c_log, d) * 2L - decay) / ln10(d);
}

struct WkbModel {
  int n = 2;
  long N = 0;
  Real E_est{kPlannerDigits};
  Real C_log{kPlannerDigits};
};

inline WkbModel wkb_model(int n, long N) { return {n, N, wkb_energy(n, N), wkb_prefactor(n, N)}; }

/// Fourier and spatial tails of state N including the n = 1 special case,
/// whose prefactor grows with the relevant abscissa.
struct MonomialTails {
  int n;
  Real E;
  std::optional<Real> c_log;  // unset for n = 1

  Real prefactor_at(const Real& x) const { return c_log ? *c_log : harmonic_prefactor(E, x); }

  Real fourier(const Real& p) const {
    Real x_s = sqrt(max(square(p / 2L) - E, Real(0L, kPlannerDigits)));
    return fourier_tail(n, E, prefactor_at(x_s), p);
  }
  Real spatial(const Real& x) const { return spatial_tail(n, E, prefactor_at(x), x); }
};

inline MonomialTails monomial_tails(int n, long N, const Real& E) {
  return {n, Real(E, kPlannerDigits), n == 1 ? std::nullopt : std::optional<Real>(wkb_prefactor(n, N))};
}

/// Step h solving fourier(2 pi / h) = -digits.
inline Real solve_step(const MonomialTails& tails, double digits) {
  const Digits d = kPlannerDigits;
  Real target(-digits, d);
  auto g = [&](const Real& p) { return tails.fourier(p) - target; };
  Real p_lo = sqrt(tails.E) * 2L * Real(1.0 + 1e-12, d) + Real(1e-30, d);
  Real p_hi = detail::expand_until_negative(g, max(p_lo * 2L, Real(1L, d)));
  Real p = detail::bisect(g, p_lo, p_hi);
  return pi(d) * 2L / p;
}

/// Abscissa solving spatial(x) = -digits.
inline Real solve_window(const MonomialTails& tails, double digits) {
  const Digits d = kPlannerDigits;
  Real target(-digits, d);
  auto g = [&](const Real& x) { return tails.spatial(x) - target; };
  Real x_lo = pow(max(tails.E, Real(1e-30, d)), Real(1L, d) / (2L * tails.n)) * Real(1.0 + 1e-12, d);
  Real x_hi = detail::expand_until_negative(g, max(x_lo * 2L, Real(1L, d)));
  return detail::bisect(g, x_lo, x_hi);
}

/// Plan for the normalization integral of state N of x^{2n}: the Fourier
/// tail at 2 pi/h and the spatial tail at x_max both meet 10^-(P + slack),
/// and M + 1 exceeds E^{(n+1)/2n} / pi (more samples than oscillations).
inline QuadPlan plan_monomial_state(int n, long N, long P) {
  if (n < 1) throw std::invalid_argument("plan_monomial_state requires n >= 1");
  if (N < 0) throw std::invalid_argument("plan_monomial_state requires N >= 0");
  if (P < 10) throw std::invalid_argument("plan_monomial_state requires P >= 10");
  const Digits d = kPlannerDigits;
  Real E = wkb_energy(n, N);
  MonomialTails tails = monomial_tails(n, N, E);
  double budget = static_cast<double>(P + kPlanSlackDigits);

  QuadPlan plan;
  plan.h = solve_step(tails, budget);
  plan.x_min = Real(0L, d);
  plan.x_max = solve_window(tails, budget);
  plan.M = (plan.x_max / plan.h).to_long_ceil();
  Real oscillations = pow(E, Real(n + 1L, d) / (2L * n)) / pi(d);
  if (!(Real(plan.M + 1, d) > oscillations)) {
    plan.M = oscillations.to_long_floor();
    plan.h = plan.x_max / plan.M;
  }
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  Real ft = tails.fourier(pi(d) * 2L / plan.h);
  Real st = tails.spatial(plan.x_max);
  plan.est_error_log10 = max(ft, st).to_double();
  plan.shift_digits = (tails.prefactor_at(plan.x_max) * 2L / ln10(d)).to_double();
  return plan;
}

/// Closed-form quartic ground-state plan with E ~ 0 and C ~ 1:
/// M+1 = ceil(3 ln10 / (2^{4/3} pi) P), h = 2^{1/9} pi^{1/3} (M+1)^{-2/3}.
inline QuadPlan plan_quartic_ground_closed_form(long P) {
  if (P < 10) throw std::invalid_argument("plan_quartic_ground_closed_form requires P >= 10");
  const Digits d = kPlannerDigits;
  Real p = pi(d);
  Real two(2L, d);
  Real rate = pow(two, Real(4L, d) / 3L) * p / 3L;  // ~2.64
  long m_plus_1 = (ln10(d) / rate * P).to_long_ceil();
  QuadPlan plan;
  plan.M = m_plus_1 - 1;
  plan.h = pow(two, Real(1L, d) / 9L) * pow(p, Real(1L, d) / 3L) * pow(Real(m_plus_1, d), Real(-2L, d) / 3L);
  plan.x_min = Real(0L, d);
  plan.x_max = plan.h * m_plus_1;
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  plan.est_error_log10 = -(rate * m_plus_1 / ln10(d)).to_double();
  return plan;
}

// ---------------------------------------------------------------------------
// Double well -s^2 psi'' + (x^2 - 1)^2 psi = eps psi.

struct DoubleWellModel {
  Fraction s{1, 100};
};

/// Re phi(x_s, p) = (4/3s) Re[(1 + i p s/2)^{3/2} - 1], natural-log units.
inline Real double_well_fourier_exponent(const Real& s, const Real& p) {
  const Digits d = kPlannerDigits;
  Real y = Real(p, d) * Real(s, d) / 2L;
  Real r = sqrt(square(y) + 1L);
  Real theta = atan(y);
  Real re = pow(r, Real(3L, d) / 2L) * cos(theta * 3L / 2L);
  return (re - 1L) * 4L / (Real(s, d) * 3L);
}

/// Large-ps form -(1/3s) (p s)^{3/2} of the exponent above.
inline Real double_well_fourier_exponent_asymptotic(const Real& s, const Real& p) {
  const Digits d = kPlannerDigits;
  Real ps = Real(p, d) * Real(s, d);
  return -pow(ps, Real(3L, d) / 2L) / (Real(s, d) * 3L);
}

/// log10 of psi(x)^2 ~ e^{-2 (x-1)^2 (x+2) / 3s}.
inline Real double_well_spatial_tail(const Real& s, const Real& x) {
  const Digits d = kPlannerDigits;
  Real xr(x, d);
  Real cubic = square(xr - 1L) * (xr + 2L);
  return -(cubic * 2L) / (Real(s, d) * 3L * ln10(d));
}

/// h ~ 2 pi (3 ln10)^{-2/3} s^{1/3} P^{-2/3} (about 1.73 s^{1/3} P^{-2/3}).
inline Real double_well_asymptotic_step(const Fraction& s, long P) {
  const Digits d = kPlannerDigits;
  Real third = Real(1L, d) / 3L;
  return pi(d) * 2L / pow(ln10(d) * 3L, third * 2L) * pow(s.to_real(d), third) * pow(Real(P, d), -(third * 2L));
}

/// x_max ~ (3/2 ln10)^{1/3} s^{1/3} P^{1/3} (about 1.51 s^{1/3} P^{1/3}).
inline Real double_well_asymptotic_window(const Fraction& s, long P) {
  const Digits d = kPlannerDigits;
  Real third = Real(1L, d) / 3L;
  return pow(ln10(d) * 3L / 2L * s.to_real(d) * P, third);
}

/// Largest real root of (x - 1)^2 (x + 2) = threshold, threshold > 0.
inline Real double_well_window_root(const Real& threshold) {
  const Digits d = kPlannerDigits;
  auto g = [&](const Real& x) { return threshold - square(x - 1L) * (x + 2L); };
  Real hi = detail::expand_until_negative(g, Real(2L, d));
  return detail::bisect(g, Real(1L, d), hi, 1e-12);
}

/// Smallest non-negative x with (x - 1)^2 (x + 2) <= threshold; 0 once the
/// threshold reaches the value 2 at the origin.
inline Real double_well_inner_root(const Real& threshold) {
  const Digits d = kPlannerDigits;
  if (threshold >= 2L) return Real(0L, d);
  auto g = [&](const Real& x) { return square(x - 1L) * (x + 2L) - threshold; };
  return detail::bisect(g, Real(0L, d), Real(1L, d), 1e-12);
}

/// Plan for the even ground state of the double well: h from the exact
/// saddle exponent, window from the cubic (x-1)^2 (x+2) = (3/2) ln10 s P'.
inline QuadPlan plan_double_well(const Fraction& s_frac, long P) {
  if (s_frac.num <= 0) throw std::invalid_argument("plan_double_well requires s > 0");
  if (P < 10) throw std::invalid_argument("plan_double_well requires P >= 10");
  const Digits d = kPlannerDigits;
  Real s = s_frac.to_real(d);
  long budget = P + kPlanSlackDigits;
  Real target = ln10(d) * budget;
  auto g = [&](const Real& p) { return double_well_fourier_exponent(s, p) + target; };
  Real p_hi = detail::expand_until_negative(g, Real(1L, d) / s);
  Real p = detail::bisect(g, Real(1e-12, d), p_hi);

  Real threshold = ln10(d) * 3L / 2L * s * budget;
  QuadPlan plan;
  plan.h = pi(d) * 2L / p;
  plan.x_max = double_well_window_root(threshold);
  plan.x_min = double_well_inner_root(threshold);
  plan.M = ((plan.x_max - plan.x_min) / plan.h).to_long_ceil();
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  Real ft = double_well_fourier_exponent(s, pi(d) * 2L / plan.h) / ln10(d);
  Real st = double_well_spatial_tail(s, plan.x_max);
  plan.est_error_log10 = max(ft, st).to_double();
  return plan;
}

}  // namespace trapnorm

#endif  // TRAPNORM_WKB_HPP
