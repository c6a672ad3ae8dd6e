#ifndef TRAPNORM_SCHRODINGER_HPP
#define TRAPNORM_SCHRODINGER_HPP

// Full-precision eigenfunctions of psi'' = q(x) psi with a polynomial q,
// integrated outward from x = 0 by Taylor series, and eigenvalue refinement
// by node-counting bisection.
//
//   Monomial{n}:   q(x) = x^{2n} - E
//   DoubleWell{s}: q(x) = ((x^2 - 1)^2 - eps) / s^2

#include <trapnorm/bigreal.hpp>
#include <trapnorm/errors.hpp>
#include <trapnorm/plan.hpp>
#include <trapnorm/quadrature.hpp>
#include <trapnorm/wkb.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace trapnorm {

struct Monomial {
  int n = 2;
};
struct DoubleWell {
  Fraction s{1, 100};
};
using PotentialSpec = std::variant<Monomial, DoubleWell>;

/// Canonical text form, e.g. "x2n:2" or "doublewell:1/100".
inline std::string problem_id(const PotentialSpec& spec) {
  if (auto* m = std::get_if<Monomial>(&spec)) return "x2n:" + std::to_string(m->n);
  return "doublewell:" + std::get<DoubleWell>(spec).s.to_string();
}

inline void validate_spec(const PotentialSpec& spec) {
  if (auto* m = std::get_if<Monomial>(&spec); m && m->n < 1)
    throw std::invalid_argument("monomial potential requires n >= 1");
  if (auto* w = std::get_if<DoubleWell>(&spec); w && w->s.num <= 0)
    throw std::invalid_argument("double-well potential requires s > 0");
}

/// Step-size controls for the Taylor integrator. A step of length D over a
/// stretch where |q| <= Q satisfies D sqrt(Q) <= rho (rho_oscillatory where q
/// changes sign or is negative, which keeps at most one node per step).
struct StepPolicy {
  double rho_oscillatory = 2.5;
  double rho_forbidden = 8.0;
  double max_step = 0.5;
  double chunk = 0.25;
  long max_order = 50000;
  double overflow_log10 = 1e6;
};

struct PsiState {
  Real x;
  Real psi;
  Real dpsi;
  long nodes = 0;
  int last_sign = 0;
};

class TaylorIntegrator {
 public:
  TaylorIntegrator(const PotentialSpec& spec, const Real& energy, Digits wp, StepPolicy policy = {})
      : policy_(policy), wp_(wp), bits_(digits_to_bits(wp)) {
    validate_spec(spec);
    if (auto* m = std::get_if<Monomial>(&spec)) {
      int deg = 2 * m->n;
      coeffs_.assign(static_cast<std::size_t>(deg) + 1, Real(wp));
      coeffs_[0] = -Real(energy, wp);
      coeffs_[static_cast<std::size_t>(deg)] = Real(1L, wp);
      monomial_n_ = m->n;
      energy_d_ = energy.to_double();
    } else {
      const Fraction& s = std::get<DoubleWell>(spec).s;
      // 1/s^2 = den^2 / num^2
      Real inv_s2 = square(Real(s.den, wp)) / square(Real(s.num, wp));
      coeffs_.assign(5, Real(wp));
      coeffs_[0] = (Real(1L, wp) - Real(energy, wp)) * inv_s2;
      coeffs_[2] = inv_s2 * -2L;
      coeffs_[4] = inv_s2;
      inv_s2_d_ = 1.0 / (s.to_double() * s.to_double());
      energy_d_ = energy.to_double();
    }
    degree_ = static_cast<int>(coeffs_.size()) - 1;
    ring_.assign(static_cast<std::size_t>(degree_) + 3, Real(wp));
    shifted_.assign(coeffs_.size(), Real(wp));
    scaled_.assign(coeffs_.size(), Real(wp));
  }

  Digits precision() const { return wp_; }
  int degree() const { return degree_; }

  PsiState start(Parity parity) const {
    if (parity == Parity::none) throw std::invalid_argument("start: parity must be even or odd");
    PsiState st{Real(0L, wp_), Real(parity == Parity::even ? 1L : 0L, wp_),
                Real(parity == Parity::even ? 0L : 1L, wp_), 0, parity == Parity::even ? 1 : 0};
    return st;
  }

  /// Range [lo, hi] of q over [xa, xb], 0 <= xa <= xb (double precision).
  std::pair<double, double> q_range(double xa, double xb) const {
    if (monomial_n_ > 0) {
      double lo = std::pow(xa, 2 * monomial_n_) - energy_d_;
      double hi = std::pow(xb, 2 * monomial_n_) - energy_d_;
      return {lo, hi};
    }
    auto w = [](double x) { return (x * x - 1.0) * (x * x - 1.0); };
    double wmax = std::max(w(xa), w(xb));
    double wmin = (xa <= 1.0 && xb >= 1.0) ? 0.0 : std::min(w(xa), w(xb));
    return {(wmin - energy_d_) * inv_s2_d_, (wmax - energy_d_) * inv_s2_d_};
  }

  /// Largest admissible Taylor step on [xa, xb].
  double allowed_step(double xa, double xb) const {
    auto [lo, hi] = q_range(xa, xb);
    double qmax = std::max(std::fabs(lo), std::fabs(hi));
    double rho = lo < 0.0 ? policy_.rho_oscillatory : policy_.rho_forbidden;
    double step = qmax > 0.0 ? rho / std::sqrt(qmax) : policy_.max_step;
    return std::min(step, policy_.max_step);
  }

  /// Advances over one interval, subdivided into equal Taylor steps.
  void advance_to(PsiState& st, const Real& x_target) {
    double xa = st.x.to_double();
    double xb = x_target.to_double();
    if (!(xb >= xa)) throw std::invalid_argument("TaylorIntegrator integrates forward only");
    if (xb == xa && st.x == x_target) return;
    double allowed = allowed_step(xa, xb);
    long pieces = std::max(1L, static_cast<long>(std::ceil((xb - xa) / allowed)));
    Real x0(st.x, wp_);
    Real span = Real(x_target, wp_) - x0;
    for (long j = 1; j <= pieces; ++j) {
      Real next(wp_);
      if (j == pieces) {
        next = Real(x_target, wp_);
      } else {
        mpfr_mul_si(next.raw(), span.raw(), j, MPFR_RNDN);
        mpfr_div_si(next.raw(), next.raw(), pieces, MPFR_RNDN);
        next += x0;
      }
      step(st, next);
    }
  }

  /// Advances over a long stretch in chunks of at most policy.chunk.
  void advance_chunked(PsiState& st, const Real& x_target) {
    double xa = st.x.to_double();
    double xb = x_target.to_double();
    long chunks = std::max(1L, static_cast<long>(std::ceil((xb - xa) / policy_.chunk)));
    Real x0(st.x, wp_);
    Real span = Real(x_target, wp_) - x0;
    for (long j = 1; j <= chunks; ++j) {
      Real next(wp_);
      if (j == chunks) {
        next = Real(x_target, wp_);
      } else {
        mpfr_mul_si(next.raw(), span.raw(), j, MPFR_RNDN);
        mpfr_div_si(next.raw(), next.raw(), chunks, MPFR_RNDN);
        next += x0;
      }
      advance_to(st, next);
    }
  }

  /// Highest Taylor order used by any step so far.
  long max_order_used() const { return max_order_used_; }
  long steps_taken() const { return steps_; }

 private:
  // One Taylor step from st.x to x_next. With b_k = a_k D^k,
  //   b_{k+2} = sum_j Q_j b_{k-j} / ((k+1)(k+2)),  Q_j = q_j(x0) D^{j+2}.
  void step(PsiState& st, const Real& x_next) {
    Real delta = x_next - st.x;
    delta = Real(delta, wp_);
    shift_coefficients(st.x);
    // Q_j = q_j D^{j+2}
    Real dpow = square(delta);
    for (int j = 0; j <= degree_; ++j) {
      mpfr_mul(scaled_[static_cast<std::size_t>(j)].raw(), shifted_[static_cast<std::size_t>(j)].raw(), dpow.raw(), MPFR_RNDN);
      dpow *= delta;
    }
    const std::size_t R = ring_.size();
    mpfr_set(ring_[0].raw(), st.psi.raw(), MPFR_RNDN);
    mpfr_mul(ring_[1].raw(), st.dpsi.raw(), delta.raw(), MPFR_RNDN);
    Real sum_psi = ring_[0] + ring_[1];
    Real sum_d = ring_[1];
    sum_psi = Real(sum_psi, wp_);
    sum_d = Real(sum_d, wp_);
    Real acc(wp_), tmp(wp_);

    mpfr_exp_t scale = std::max(exponent_of(ring_[0]), exponent_of(ring_[1]));
    const mpfr_exp_t drop = static_cast<mpfr_exp_t>(bits_) + 8;
    int small_run = 0;
    for (int r = 0; r < 2; ++r)
      small_run = is_small(ring_[static_cast<std::size_t>(r)], scale, drop) ? small_run + 1 : 0;

    long k = 0;
    for (;; ++k) {
      if (k + 2 > policy_.max_order) throw EigenError("Taylor series failed to converge within max_order terms");
      mpfr_set_zero(acc.raw(), 1);
      int jmax = static_cast<int>(std::min<long>(k, degree_));
      for (int j = 0; j <= jmax; ++j) {
        const Real& q = scaled_[static_cast<std::size_t>(j)];
        if (q.is_zero()) continue;
        const Real& b = ring_[static_cast<std::size_t>((k - j) % static_cast<long>(R))];
        mpfr_mul(tmp.raw(), q.raw(), b.raw(), MPFR_RNDN);
        mpfr_add(acc.raw(), acc.raw(), tmp.raw(), MPFR_RNDN);
      }
      Real& out = ring_[static_cast<std::size_t>((k + 2) % static_cast<long>(R))];
      mpfr_div_ui(out.raw(), acc.raw(), static_cast<unsigned long>((k + 1) * (k + 2)), MPFR_RNDN);
      mpfr_add(sum_psi.raw(), sum_psi.raw(), out.raw(), MPFR_RNDN);
      mpfr_mul_ui(tmp.raw(), out.raw(), static_cast<unsigned long>(k + 2), MPFR_RNDN);
      mpfr_add(sum_d.raw(), sum_d.raw(), tmp.raw(), MPFR_RNDN);

      if (!out.is_zero()) scale = std::max(scale, mpfr_get_exp(out.raw()));
      small_run = is_small(out, scale, drop) ? small_run + 1 : 0;
      if (small_run >= degree_ + 2 && k + 2 >= degree_ + 4) break;
    }
    max_order_used_ = std::max(max_order_used_, k + 2);
    ++steps_;

    st.psi = std::move(sum_psi);
    mpfr_div(sum_d.raw(), sum_d.raw(), delta.raw(), MPFR_RNDN);
    st.dpsi = std::move(sum_d);
    st.x = Real(x_next, wp_);

    if (!st.psi.is_zero() && static_cast<double>(mpfr_get_exp(st.psi.raw())) * 0.30103 > policy_.overflow_log10)
      throw EigenError("eigenvalue too far off: |psi| exceeded the overflow bound");
    int s = st.psi.sign();
    if (s != 0) {
      if (st.last_sign != 0 && s != st.last_sign) ++st.nodes;
      st.last_sign = s;
    }
  }

  static mpfr_exp_t exponent_of(const Real& v) {
    return v.is_zero() ? std::numeric_limits<mpfr_exp_t>::min() / 2 : mpfr_get_exp(v.raw());
  }
  static bool is_small(const Real& v, mpfr_exp_t scale, mpfr_exp_t drop) {
    return v.is_zero() || mpfr_get_exp(v.raw()) < scale - drop;
  }

  // Taylor coefficients of q about x0 by repeated synthetic division.
  void shift_coefficients(const Real& x0) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) mpfr_set(shifted_[i].raw(), coeffs_[i].raw(), MPFR_RNDN);
    const int d = degree_;
    for (int j = 0; j < d; ++j)
      for (int i = d - 1; i >= j; --i)
        mpfr_fma(shifted_[static_cast<std::size_t>(i)].raw(), x0.raw(), shifted_[static_cast<std::size_t>(i) + 1].raw(),
                 shifted_[static_cast<std::size_t>(i)].raw(), MPFR_RNDN);
  }

  StepPolicy policy_;
  Digits wp_;
  mpfr_prec_t bits_;
  std::vector<Real> coeffs_;
  std::vector<Real> shifted_;
  std::vector<Real> scaled_;
  std::vector<Real> ring_;
  int degree_ = 0;
  int monomial_n_ = 0;
  double energy_d_ = 0.0;
  double inv_s2_d_ = 1.0;
  long max_order_used_ = 0;
  long steps_ = 0;
};

struct PsiValue {
  Real psi;
  Real dpsi;
  long nodes = 0;
};

/// Un-normalized psi and psi' at x_target >= 0, starting from (1, 0) for even
/// and (0, 1) for odd parity at x = 0.
inline PsiValue evaluate_wavefunction(const PotentialSpec& spec, const Real& energy, Parity parity,
                                      const Real& x_target, Digits digits, const StepPolicy& policy = {}) {
  if (x_target < 0L) throw std::invalid_argument("evaluate_wavefunction requires x_target >= 0");
  Digits wp = digits + 20;
  TaylorIntegrator integ(spec, energy, wp, policy);
  PsiState st = integ.start(parity);
  integ.advance_chunked(st, Real(x_target, wp));
  return {Real(st.psi, digits), Real(st.dpsi, digits), st.nodes};
}

/// psi at x_min + m h, m = 0..M, for one plan. Each worker integrates from
/// the origin through the same grid, so the samples are bit-identical for
/// any thread count.
inline std::vector<Real> psi_on_grid(const PotentialSpec& spec, const Real& energy, Parity parity, const QuadPlan& plan,
                                     Digits wp, unsigned threads = 1, const StepPolicy& policy = {}) {
  validate_plan(plan);
  std::size_t count = static_cast<std::size_t>(plan.M) + 1;
  std::vector<Real> out(count);
  unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::size_t block = (count + workers - 1) / workers;
  Real h(plan.h, wp);
  Real x_min(plan.x_min, wp);

  auto run = [&](std::size_t begin, std::size_t end) {
    TaylorIntegrator integ(spec, energy, wp, policy);
    PsiState st = integ.start(parity);
    if (!x_min.is_zero()) integ.advance_chunked(st, x_min);
    for (std::size_t m = 0; m < end; ++m) {
      integ.advance_to(st, detail::abscissa(x_min, h, static_cast<long>(m), wp));
      if (m >= begin) out[m] = st.psi;
    }
  };

  if (workers == 1) {
    run(0, count);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = w * block, end = std::min(count, begin + block);
      if (begin >= end) continue;
      pool.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Eigenvalue refinement.

struct EigenState {
  PotentialSpec potential;
  long N = 0;
  Parity parity = Parity::even;
  Real E;
  long P_E = 0;
  long nodes = 0;       // total nodes on the real line
  long iterations = 0;  // bisection steps
  double matching_point = 0.0;
};

struct RefineOptions {
  StepPolicy policy{};
  long guard = 23;
};

namespace detail {

/// Matching point where psi^2 has decayed below 10^-depth for every E in the bracket.
inline Real matching_point(const PotentialSpec& spec, long N, const Real& e_hi, double depth) {
  const Digits d = kPlannerDigits;
  if (auto* m = std::get_if<Monomial>(&spec)) {
    MonomialTails tails = monomial_tails(m->n, N, wkb_energy(m->n, N));
    Real x = solve_window(tails, depth);
    Real turning = pow(Real(e_hi, d), Real(1L, d) / (2L * m->n));
    return max(x, turning * Real(1.25, d));
  }
  const Fraction& s = std::get<DoubleWell>(spec).s;
  Real threshold = ln10(d) * 3L / 2L * s.to_real(d) * Real(depth, d);
  return double_well_window_root(threshold);
}

inline long count_half_nodes(const PotentialSpec& spec, const Real& energy, Parity parity, const Real& x_f, Digits wp,
                             const StepPolicy& policy) {
  TaylorIntegrator integ(spec, Real(energy, wp), wp, policy);
  PsiState st = integ.start(parity);
  integ.advance_chunked(st, Real(x_f, wp));
  return st.nodes;
}

inline EigenState bisect_eigenvalue(const PotentialSpec& spec, long N, Parity parity, long half_index, Real lo, Real hi,
                                    long P_E, const RefineOptions& opts) {
  if (P_E < 10) throw std::invalid_argument("eigenvalue refinement requires P_E >= 10");
  const long full = P_E + opts.guard;
  const Digits ed(full + 5);
  lo = Real(lo, ed);
  hi = Real(hi, ed);

  Real x_f = matching_point(spec, N, hi * 2L, static_cast<double>(full));
  auto count = [&](const Real& e, long digits) {
    return count_half_nodes(spec, e, parity, x_f, Digits(digits), opts.policy);
  };
  auto working_digits = [&](const Real& l, const Real& h) {
    double width = ((h - l) / l).log10_abs();
    long dig = static_cast<long>(std::ceil(-width)) + 25;
    return std::clamp<long>(dig, 30, full);
  };

  long start_digits = std::min<long>(30, full);
  long c_lo = count(lo, start_digits), c_hi = count(hi, start_digits);
  for (int it = 0; it < 12 && c_lo > half_index; ++it) {
    lo /= 2L;
    c_lo = count(lo, start_digits);
  }
  for (int it = 0; it < 12 && c_hi <= half_index; ++it) {
    hi *= 2L;
    x_f = matching_point(spec, N, hi * 2L, static_cast<double>(full));
    c_hi = count(hi, start_digits);
  }
  if (c_lo > half_index || c_hi <= half_index)
    throw EigenError("bracket failure for state " + std::to_string(N) + ": half-line node counts " +
                     std::to_string(c_lo) + " at lower end, " + std::to_string(c_hi) + " at upper end, need <= " +
                     std::to_string(half_index) + " and > " + std::to_string(half_index));

  Real tol = pow10(-P_E, ed);
  long max_iter = static_cast<long>(4.0 * kBitsPerDigit * static_cast<double>(full)) + 400;
  long iter = 0;
  while (!(hi - lo < tol * lo)) {
    if (++iter > max_iter) throw EigenError("eigenvalue bisection did not converge");
    Real mid = (lo + hi) / 2L;
    long c = count(mid, working_digits(lo, hi));
    if (c > half_index) hi = std::move(mid);
    else lo = std::move(mid);
  }

  long half_nodes = count(lo, full);
  long total = 2 * half_nodes + (parity == Parity::odd ? 1 : 0);
  if (total != N)
    throw EigenError("converged eigenfunction has " + std::to_string(total) + " nodes, expected " + std::to_string(N));

  EigenState out;
  out.potential = spec;
  out.N = N;
  out.parity = parity;
  out.E = (lo + hi) / 2L;
  out.P_E = P_E;
  out.nodes = total;
  out.iterations = iter;
  out.matching_point = x_f.to_double();
  return out;
}

}  // namespace detail

/// Refines eigenvalue N of -psi'' + x^{2n} psi = E psi to P_E digits,
/// starting from the bracket [0.5, 2] * wkb_energy(n, N).
inline EigenState refine_eigenvalue(const PotentialSpec& spec, long N, long P_E, const RefineOptions& opts = {}) {
  validate_spec(spec);
  if (N < 0) throw std::invalid_argument("state index N must be >= 0");
  if (auto* w = std::get_if<DoubleWell>(&spec)) {
    if (N != 0) throw std::invalid_argument("double well: only the even ground state (N = 0) is supported");
    const Digits d(P_E + opts.guard + 5);
    Real two_s = w->s.to_real(d) * 2L;
    return detail::bisect_eigenvalue(spec, 0, Parity::even, 0, two_s / 10L, two_s * 4L, P_E, opts);
  }
  int n = std::get<Monomial>(spec).n;
  const Digits d(P_E + opts.guard + 5);
  Real e_wkb(wkb_energy(n, N), d);
  Parity parity = N % 2 == 0 ? Parity::even : Parity::odd;
  return detail::bisect_eigenvalue(spec, N, parity, N / 2, e_wkb / 2L, e_wkb * 2L, P_E, opts);
}

/// Lowest even eigenvalue eps_+ of -s^2 psi'' + (x^2-1)^2 psi = eps psi,
/// bracket [0.1, 4] * 2s.
inline EigenState refine_double_well_ground(const Fraction& s, long P_E, const RefineOptions& opts = {}) {
  if (s.num <= 0) throw std::invalid_argument("refine_double_well_ground requires s > 0");
  return refine_eigenvalue(DoubleWell{s}, 0, P_E, opts);
}

}  // namespace trapnorm

#endif  // TRAPNORM_SCHRODINGER_HPP
