#ifndef TRAPNORM_QUADRATURE_HPP
#define TRAPNORM_QUADRATURE_HPP

// Closed Newton-Cotes rules, the extended trapezoid and Simpson rules,
// Euler-Maclaurin endpoint corrections and the symmetric infinite-range
// trapezoid sum.
//
// All sums are accumulated in ascending sample index at the working
// precision. Samples may be evaluated on several threads, but the reduction
// is sequential so results do not depend on the worker count.

#include <trapnorm/bigreal.hpp>
#include <trapnorm/plan.hpp>
#include <trapnorm/sampling.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace trapnorm {

enum class Parity { even, odd, none };

/// A pure real function. `eval` must return the same value for the same
/// argument and precision.
struct Integrand {
  std::function<Real(const Real&)> eval;
  Parity parity = Parity::none;
  bool smooth_endpoints = false;
  /// False for integrands that cannot be sampled outside the integration
  /// interval (rules out central stencils at the endpoints).
  bool defined_outside = true;

  Real operator()(const Real& x) const { return eval(x); }
};

enum class BasicRule { trapezoid, simpson, simpson38, boole };

struct QuadResult {
  Real value;
  long M = 0;
  Real h;
  double est_error_log10 = std::numeric_limits<double>::quiet_NaN();
  long evaluations = 0;
};

namespace detail {

inline Real abscissa(const Real& a, const Real& h, long m, Digits wp) {
  Real x(wp);
  mpfr_mul_si(x.raw(), h.raw(), m, MPFR_RNDN);
  x += a;
  return x;
}

}  // namespace detail

/// f_m = f(a + m h), m = 0..M, evaluated with up to `workers` threads.
inline std::vector<Real> sample_grid(const Integrand& f, const Real& a, const Real& h, long M, Digits wp,
                                     unsigned workers = 1) {
  return sample_indexed(static_cast<std::size_t>(M + 1), workers,
                        [&](std::size_t m) { return f(detail::abscissa(a, h, static_cast<long>(m), wp)); });
}

/// [f_0/2 + f_s + f_2s + ... + f_M/2] (s h) over every `stride`-th sample.
inline Real trapezoid_from_samples(std::span<const Real> f, std::size_t stride, const Real& step, Digits wp) {
  std::size_t last = f.size() - 1;
  if (f.size() < 2 || stride == 0 || last % stride != 0)
    throw std::invalid_argument("trapezoid_from_samples: sample count incompatible with stride");
  Real acc = f[0] / 2L;
  acc = Real(acc, wp);
  for (std::size_t m = stride; m < last; m += stride) acc += f[m];
  acc += f[last] / 2L;
  return acc * step;
}

/// S(h) = (4 T(h) - T(2h)) / 3.
inline Real simpson_from_trapezoids(const Real& t_h, const Real& t_2h) {
  Real r = t_h * 4L;
  r -= t_2h;
  r /= 3L;
  return r;
}

/// T(h), S(h), S_3/8(h) or B(h) on [a, b] with h = (b - a) / M, M = 1..4.
inline Real apply_basic_rule(BasicRule rule, const Integrand& f, const Real& a, const Real& b, Digits wp) {
  if (!(a < b)) throw std::invalid_argument("apply_basic_rule requires a < b");
  long M = 0;
  std::vector<long> weights;
  long num = 1, den = 1;
  switch (rule) {
    case BasicRule::trapezoid: M = 1; weights = {1, 1}; num = 1; den = 2; break;
    case BasicRule::simpson: M = 2; weights = {1, 4, 1}; num = 1; den = 3; break;
    case BasicRule::simpson38: M = 3; weights = {1, 3, 3, 1}; num = 3; den = 8; break;
    case BasicRule::boole: M = 4; weights = {7, 32, 12, 32, 7}; num = 2; den = 45; break;
  }
  Real h = Real(b - a, wp) / M;
  Real acc(wp);
  for (long m = 0; m <= M; ++m) acc += f(detail::abscissa(a, h, m, wp)) * weights[static_cast<std::size_t>(m)];
  acc *= num;
  acc /= den;
  return acc * h;
}

/// Composite trapezoid T(h), h = (b - a) / M.
inline QuadResult extended_trapezoid(const Integrand& f, const Real& a, const Real& b, long M, Digits wp,
                                     unsigned workers = 1) {
  if (M < 1) throw std::invalid_argument("extended_trapezoid requires M >= 1");
  Real h = Real(b - a, wp) / M;
  auto samples = sample_grid(f, a, h, M, wp, workers);
  return QuadResult{trapezoid_from_samples(samples, 1, h, wp), M, h, std::numeric_limits<double>::quiet_NaN(), M + 1};
}

/// Composite Simpson S(h) with weights 1,4,2,...,2,4,1 times h/3, computed as
/// the Richardson combination of the trapezoid sums at h and 2h over the same
/// samples.
inline QuadResult extended_simpson(const Integrand& f, const Real& a, const Real& b, long M, Digits wp,
                                   unsigned workers = 1) {
  if (M < 2 || M % 2 != 0) throw std::invalid_argument("extended_simpson requires an even M >= 2");
  Real h = Real(b - a, wp) / M;
  Real h2 = Real(b - a, wp) / (M / 2);
  auto samples = sample_grid(f, a, h, M, wp, workers);
  Real t_h = trapezoid_from_samples(samples, 1, h, wp);
  Real t_2h = trapezoid_from_samples(samples, 2, h2, wp);
  return QuadResult{simpson_from_trapezoids(t_h, t_2h), M, h, std::numeric_limits<double>::quiet_NaN(), M + 1};
}

enum class DerivativeScheme { central, forward, backward };

/// Three-point estimate of f'(x):
///   central  (f(x+d) - f(x-d)) / 2d                 = f' + d^2 f'''/6 + ...
///   forward  -(3f(x) - 4f(x+d) + f(x+2d)) / 2d      = f' - d^2 f'''/3 + ...
///   backward (3f(x) - 4f(x-d) + f(x-2d)) / 2d       = f' - d^2 f'''/3 + ...
inline Real endpoint_derivative(const Integrand& f, const Real& x, const Real& h, DerivativeScheme scheme,
                                const Real& delta) {
  if (!(delta > 0L)) throw std::invalid_argument("endpoint_derivative requires delta > 0");
  if (scheme == DerivativeScheme::central) {
    if (!(delta * 2L < h)) throw std::invalid_argument("central stencil requires delta < h/2");
    return (f(x + delta) - f(x - delta)) / (delta * 2L);
  }
  Real sgn_delta = scheme == DerivativeScheme::forward ? delta : -delta;
  Real f0 = f(x);
  Real f1 = f(x + sgn_delta);
  Real f2 = f(x + sgn_delta * 2L);
  Real num = f0 * 3L - f1 * 4L + f2;
  Real est = num / (delta * 2L);
  return scheme == DerivativeScheme::forward ? -est : est;
}

enum class EndpointStencil { one_sided, central };

struct EmOptions {
  int k_max = 1;
  EndpointStencil stencil = EndpointStencil::one_sided;
  /// Stencil spacing; defaults to h / sqrt(20). Must stay unset for k_max = 2.
  std::optional<Real> delta;
};

/// Default one-sided stencil spacing h / sqrt(20). With this spacing the
/// stencil's own d^2 f''' error cancels the Delta^(3) term of the
/// Euler-Maclaurin series.
inline Real delta_sqrt20(const Real& h) { return h / sqrt(Real(20L, h.digits())); }

/// T(h) minus the Euler-Maclaurin endpoint corrections.
///
/// k_max = 1 subtracts B_2/2! Delta^(1) with the chosen stencil. k_max = 2
/// also removes Delta^(3); it requires one-sided stencils at spacing
/// h/sqrt(20), whose truncation error supplies exactly -B_4/4! Delta^(3).
inline QuadResult em_corrected_trapezoid(const Integrand& f, const Real& a, const Real& b, long M,
                                         const EmOptions& opts, Digits wp, unsigned workers = 1) {
  if (M < 4) throw std::invalid_argument("em_corrected_trapezoid requires M >= 4");
  if (opts.k_max != 1 && opts.k_max != 2) throw std::invalid_argument("em_corrected_trapezoid: k_max must be 1 or 2");
  if (opts.k_max == 2 && (opts.stencil != EndpointStencil::one_sided || opts.delta))
    throw std::invalid_argument("k_max = 2 requires one-sided stencils with delta = h/sqrt(20)");
  if (opts.stencil == EndpointStencil::central && !f.defined_outside)
    throw std::invalid_argument("central stencil would sample the integrand outside [a, b]");

  QuadResult t = extended_trapezoid(f, a, b, M, wp, workers);
  Real delta = opts.delta ? Real(*opts.delta, wp) : delta_sqrt20(t.h);
  if (opts.stencil == EndpointStencil::one_sided && !(delta * 2L <= b - a))
    throw std::invalid_argument("one-sided stencil would leave [a, b]");

  Real da(wp), db(wp);
  if (opts.stencil == EndpointStencil::central) {
    da = endpoint_derivative(f, a, t.h, DerivativeScheme::central, delta);
    db = endpoint_derivative(f, b, t.h, DerivativeScheme::central, delta);
  } else {
    da = endpoint_derivative(f, a, t.h, DerivativeScheme::forward, delta);
    db = endpoint_derivative(f, b, t.h, DerivativeScheme::backward, delta);
  }
  Real delta1 = (db - da) * square(t.h);
  Real value = t.value - bernoulli_ratio(1).to_real(wp) * delta1;
  return QuadResult{std::move(value), M, t.h, std::numeric_limits<double>::quiet_NaN(), M + 1 + 4};
}

/// Symmetric trapezoid sum for an even integrand from precomputed samples
/// f(x_min + m h), m = 0..M:
///   x_min = 0: h f_0 + 2h (f_1 + ... + f_M)
///   x_min > 0: 2h (f_0 + ... + f_M)
inline Real symmetric_sum_from_samples(std::span<const Real> f, const QuadPlan& plan, Digits wp) {
  if (f.size() != static_cast<std::size_t>(plan.M + 1))
    throw std::invalid_argument("symmetric_sum_from_samples: expected M+1 samples");
  Real h(plan.h, wp);
  Real acc(wp);
  if (plan.x_min.is_zero()) {
    acc += f[0] / 2L;
    for (std::size_t m = 1; m < f.size(); ++m) acc += f[m];
  } else {
    for (const Real& v : f) acc += v;
  }
  return acc * h * 2L;
}

/// Infinite-range trapezoid sum of an even integrand truncated by `plan`.
inline QuadResult infinite_trapezoid(const Integrand& f, const QuadPlan& plan, Digits wp, unsigned workers = 1) {
  validate_plan(plan);
  if (f.parity != Parity::even) throw std::invalid_argument("infinite_trapezoid sums symmetric windows: integrand must be even");
  Real h(plan.h, wp);
  Real x0(plan.x_min, wp);
  auto samples = sample_grid(f, x0, h, plan.M, wp, workers);
  return QuadResult{symmetric_sum_from_samples(samples, plan, wp), plan.M, h, plan.est_error_log10, plan.M + 1};
}

}  // namespace trapnorm

#endif  // TRAPNORM_QUADRATURE_HPP
