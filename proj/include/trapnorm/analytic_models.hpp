#ifndef TRAPNORM_ANALYTIC_MODELS_HPP
#define TRAPNORM_ANALYTIC_MODELS_HPP

// Model integrands e^{-x^2}, e^{-x^{2n}}, e^{-(x^2-a^2)^2}, their reference
// values, and planners that pick (h, x_min, x_max, M) for a digit target by
// balancing the Fourier (step) error against the truncation error.

#include <trapnorm/bigreal.hpp>
#include <trapnorm/plan.hpp>
#include <trapnorm/quadrature.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace trapnorm {

struct Gaussian {};
struct Power {
  int n = 1;
};
struct DoubleHump {
  Fraction a{1, 1};
};
using ModelKind = std::variant<Gaussian, Power, DoubleHump>;

inline std::string model_name(const ModelKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Gaussian>) return "gauss";
        else if constexpr (std::is_same_v<K, Power>) return "power:" + std::to_string(k.n);
        else return "doublehump:" + k.a.to_string();
      },
      kind);
}

inline void validate_model(const ModelKind& kind) {
  if (auto* p = std::get_if<Power>(&kind); p && p->n < 1) throw std::invalid_argument("power model requires n >= 1");
  if (auto* d = std::get_if<DoubleHump>(&kind); d && d->a.num <= 0)
    throw std::invalid_argument("double-hump model requires a > 0");
}

inline Integrand model_integrand(const ModelKind& kind) {
  validate_model(kind);
  Integrand f;
  f.parity = Parity::even;
  f.smooth_endpoints = true;
  f.eval = std::visit(
      [](const auto& k) -> std::function<Real(const Real&)> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Gaussian>) {
          return [](const Real& x) { return exp(-square(x)); };
        } else if constexpr (std::is_same_v<K, Power>) {
          long two_n = 2L * k.n;
          return [two_n](const Real& x) { return exp(-pow(x, two_n)); };
        } else {
          Fraction a = k.a;
          return [a](const Real& x) {
            Real a2 = square(a.to_real(x.digits()));
            return exp(-square(square(x) - a2));
          };
        }
      },
      kind);
  return f;
}

/// Reference value of the full-line integral. `value` is present only where a
/// full-precision closed form exists; `oracle` is a double-precision value.
struct ClosedForm {
  std::optional<Real> value;
  double oracle = 0.0;
  std::string source;
};

/// a e^{-a^4/2} [K_{1/4}(a^4/2)/sqrt 2 + pi I_{1/4}(a^4/2)], double precision.
inline double double_hump_bessel_oracle(double a) {
  double z = 0.5 * std::pow(a, 4);
  return a * std::exp(-z) * (std::cyl_bessel_k(0.25, z) / std::sqrt(2.0) + M_PI * std::cyl_bessel_i(0.25, z));
}

inline ClosedForm closed_form(const ModelKind& kind, Digits d) {
  validate_model(kind);
  if (std::holds_alternative<Gaussian>(kind) || (std::holds_alternative<Power>(kind) && std::get<Power>(kind).n == 1))
    return {sqrt(pi(d)), std::sqrt(M_PI), "sqrt(pi)"};
  if (auto* p = std::get_if<Power>(&kind)) {
    if (p->n == 2) return {gamma_quarter(d) / 2L, std::tgamma(0.25) / 2.0, "Gamma(1/4)/2"};
    return {std::nullopt, std::tgamma(1.0 / (2.0 * p->n)) / p->n, "Gamma(1/2n)/n (double)"};
  }
  double a = std::get<DoubleHump>(kind).a.to_double();
  return {std::nullopt, double_hump_bessel_oracle(a), "Bessel K_1/4, I_1/4 (double)"};
}

/// M+1 = ceil(ln10/pi P), h = sqrt(pi/(M+1)), x_max = (M+1) h.
inline QuadPlan plan_gaussian(long P) {
  if (P < 5) throw std::invalid_argument("plan_gaussian requires P >= 5");
  const Digits d = kPlannerDigits;
  Real pi_d = pi(d);
  Real m1 = ln10(d) / pi_d * P;
  long m_plus_1 = m1.to_long_ceil();
  QuadPlan plan;
  plan.M = m_plus_1 - 1;
  plan.h = sqrt(pi_d / m_plus_1);
  plan.x_min = Real(0L, d);
  plan.x_max = plan.h * m_plus_1;
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  plan.est_error_log10 = -(pi_d * m_plus_1 / ln10(d)).to_double();
  return plan;
}

/// Saddle-point constants of e^{-x^{2n}}.
struct PowerConstants {
  Real a_n;  // Re phi = -a_n h^{-2n/(2n-1)}
  Real b_n;  // h = b_n (M+1)^{-(1-1/2n)}
  Real c_n;  // error ~ e^{-c_n (M+1)}
};

inline PowerConstants power_constants(int n) {
  if (n < 1) throw std::invalid_argument("power model requires n >= 1");
  const Digits d = kPlannerDigits;
  Real pi_d = pi(d);
  Real two_n(2L * n, d);
  Real g = (two_n - 1L) * sin(pi_d / (4L * n - 2L));  // (2n-1) sin(pi/(4n-2))
  Real pi_over_n = pi_d / n;
  PowerConstants c{Real(d), Real(d), Real(d)};
  c.a_n = g * pow(pi_over_n, two_n / (two_n - 1L));
  c.b_n = pow(pi_over_n, 1L / two_n) * pow(g, (two_n - 1L) / (two_n * two_n));
  c.c_n = pi_over_n * pow(g, 1L - 1L / two_n);
  return c;
}

/// M+1 = ceil(ln10/c_n P), h = b_n (M+1)^{-(1-1/2n)}, x_max = (M+1) h.
inline QuadPlan plan_power(int n, long P) {
  if (n < 1) throw std::invalid_argument("plan_power requires n >= 1");
  if (P < 5) throw std::invalid_argument("plan_power requires P >= 5");
  const Digits d = kPlannerDigits;
  auto c = power_constants(n);
  long m_plus_1 = (ln10(d) / c.c_n * P).to_long_ceil();
  Real two_n(2L * n, d);
  QuadPlan plan;
  plan.M = m_plus_1 - 1;
  plan.h = c.b_n * pow(Real(m_plus_1, d), -(1L - 1L / two_n));
  plan.x_min = Real(0L, d);
  plan.x_max = plan.h * m_plus_1;
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  plan.est_error_log10 = -(c.c_n * m_plus_1 / ln10(d)).to_double();
  return plan;
}

/// Planner formulas at a fixed sample count: h = b_n (M+1)^{-(1-1/2n)},
/// x_max = (M+1) h, predicted error e^{-c_n (M+1)}. n = 1 is the Gaussian.
inline QuadPlan plan_power_fixed_M(int n, long M) {
  if (n < 1) throw std::invalid_argument("plan_power_fixed_M requires n >= 1");
  if (M < 0) throw std::invalid_argument("plan_power_fixed_M requires M >= 0");
  const Digits d = kPlannerDigits;
  auto c = power_constants(n);
  long m_plus_1 = M + 1;
  Real two_n(2L * n, d);
  QuadPlan plan;
  plan.M = M;
  plan.h = c.b_n * pow(Real(m_plus_1, d), -(1L - 1L / two_n));
  plan.x_min = Real(0L, d);
  plan.x_max = plan.h * m_plus_1;
  plan.est_error_log10 = -(c.c_n * m_plus_1 / ln10(d)).to_double();
  plan.target_digits = static_cast<long>(std::floor(-plan.est_error_log10));
  plan.guard = guard_digits(plan.M);
  return plan;
}

/// Parametric double-hump plan. eta solves (4/3) a^4 sinh^2(eta) cosh(2 eta)
/// = P ln10, which is quadratic in t^2 = sinh^2(eta): 2t^4 + t^2 = 3 P ln10 /
/// (4 a^4). The window is where (x^2 - a^2)^2 <= hump_s.
struct DoubleHumpPlan {
  QuadPlan plan;
  Real eta{kPlannerDigits};
  Real hump_s{kPlannerDigits};
};

inline DoubleHumpPlan plan_double_hump_detail(const Fraction& a_frac, long P) {
  if (a_frac.num <= 0) throw std::invalid_argument("plan_double_hump requires a > 0");
  if (P < 5) throw std::invalid_argument("plan_double_hump requires P >= 5");
  const Digits d = kPlannerDigits;
  Real a = a_frac.to_real(d);
  Real a2 = square(a);
  Real a4 = square(a2);
  Real budget = ln10(d) * P;
  Real k = budget * 3L / (a4 * 4L);
  Real t2 = (sqrt(k * 8L + 1L) - 1L) / 4L;
  Real t = sqrt(t2);
  DoubleHumpPlan out;
  out.eta = asinh(t);
  Real sinh3 = t * 3L + pow(t, 3L) * 4L;
  out.hump_s = a4 * t2 * (t2 * 2L + 1L) * 4L / 3L;
  Real root_s = sqrt(out.hump_s);

  QuadPlan& plan = out.plan;
  plan.h = sqrt(Real(27L, d)) * pi(d) / (a2 * a * sinh3 * 4L);
  plan.x_max = sqrt(a2 + root_s);
  plan.x_min = root_s >= a2 ? Real(0L, d) : sqrt(a2 - root_s);
  plan.M = ((plan.x_max - plan.x_min) / plan.h).to_long_ceil();
  plan.target_digits = P;
  plan.guard = guard_digits(plan.M);
  plan.est_error_log10 = -(out.hump_s / ln10(d)).to_double();
  return out;
}

inline QuadPlan plan_double_hump(const Fraction& a, long P) { return plan_double_hump_detail(a, P).plan; }

inline QuadPlan plan_for(const ModelKind& kind, long P) {
  validate_model(kind);
  if (std::holds_alternative<Gaussian>(kind)) return plan_gaussian(P);
  if (auto* p = std::get_if<Power>(&kind)) return plan_power(p->n, P);
  return plan_double_hump(std::get<DoubleHump>(kind).a, P);
}

// Finite-interval test integrals on [0, 1].
//   I_n   = int_0^1 (1 - x^2)^n dx
//   J_inf = int_0^1 [1 - tanh((2x - 1) / (1 - (2x - 1)^2))] dx = 1
struct PolyBump {
  int n = 1;
};
struct TanhStep {};
using FiniteModel = std::variant<PolyBump, TanhStep>;

inline std::string model_name(const FiniteModel& m) {
  if (auto* p = std::get_if<PolyBump>(&m)) return "In:" + std::to_string(p->n);
  return "Jinf";
}

inline Integrand finite_integrand(const FiniteModel& m) {
  Integrand f;
  f.smooth_endpoints = true;
  if (auto* p = std::get_if<PolyBump>(&m)) {
    if (p->n < 0) throw std::invalid_argument("I_n requires n >= 0");
    long n = p->n;
    f.eval = [n](const Real& x) { return pow(Real(1L, x.digits()) - square(x), n); };
    return f;
  }
  f.defined_outside = false;
  f.eval = [](const Real& x) {
    const Digits d = x.digits();
    Real u = x * 2L - 1L;
    Real den = Real(1L, d) - square(u);
    if (!(den > 0L)) return Real(u < 0L ? 2L : 0L, d);  // limits at x = 0 and x = 1
    return Real(1L, d) - tanh(u / den);
  };
  return f;
}

/// sum_k C(n,k) (-1)^k / (2k+1) for I_n; 1 for J_inf.
inline mpq_class finite_exact(const FiniteModel& m) {
  if (auto* p = std::get_if<PolyBump>(&m)) {
    mpq_class sum(0);
    mpz_class binom(1);
    for (long k = 0; k <= p->n; ++k) {
      mpq_class term(binom, 2 * k + 1);
      sum += (k % 2 == 0) ? term : mpq_class(-term);
      binom = binom * (p->n - k) / (k + 1);
    }
    sum.canonicalize();
    return sum;
  }
  return mpq_class(1);
}

/// Reference plan for self-consistency checks: at most half the step of
/// `plan` and at least the window of `wider` (typically the planner at P+50).
inline QuadPlan refined_plan(const QuadPlan& plan, const QuadPlan& wider) {
  QuadPlan ref;
  Real half = plan.h / 2L;
  ref.h = wider.h < half ? wider.h : half;
  ref.x_min = min(plan.x_min, wider.x_min);
  ref.x_max = max(plan.x_max, wider.x_max);
  ref.M = std::max(2 * plan.M, ((ref.x_max - ref.x_min) / ref.h).to_long_ceil());
  ref.target_digits = wider.target_digits;
  ref.guard = guard_digits(ref.M);
  ref.est_error_log10 = std::min(plan.est_error_log10, wider.est_error_log10);
  ref.shift_digits = wider.shift_digits;
  return ref;
}

/// log10 relative difference turned into digits; capped at `cap`.
inline double agreement_digits(const Real& value, const Real& reference, double cap) {
  Real diff = abs(value - reference);
  if (diff.is_zero()) return cap;
  double dig = -(diff.log10_abs() - reference.log10_abs());
  return std::min(dig, cap);
}

}  // namespace trapnorm

#endif  // TRAPNORM_ANALYTIC_MODELS_HPP
