#ifndef TRAPNORM_NORMALIZER_HPP
#define TRAPNORM_NORMALIZER_HPP

// Normalization integral  I = int psi_N(x)^2 dx  of an eigenfunction to P
// digits: plan the grid, refine E, sample psi^2 on the grid and form the
// symmetric trapezoid sum. A second run on a finer, wider grid at P + 50
// digits measures how many digits the first one actually obtained.

#include <trapnorm/bigreal.hpp>
#include <trapnorm/eigen_cache.hpp>
#include <trapnorm/errors.hpp>
#include <trapnorm/plan.hpp>
#include <trapnorm/quadrature.hpp>
#include <trapnorm/schrodinger.hpp>
#include <trapnorm/wkb.hpp>

#include <chrono>
#include <filesystem>
#include <future>
#include <optional>

namespace trapnorm {

inline constexpr long kReferenceExtraDigits = 50;

struct NormalizeOptions {
  unsigned threads = 1;
  std::optional<std::filesystem::path> cache_path;
  long max_evaluations = 1'000'000;
  /// Run the finer reference integral and report obtained digits.
  bool measure_obtained = true;
  /// psi is multiplied by this factor before squaring (scaling check).
  double sample_scale = 1.0;
  StepPolicy policy{};
};

struct NormalizationResult {
  Real integral;
  Real norm_constant;  // 1 / sqrt(integral)
  Real E;
  QuadPlan plan;
  long P = 0;
  long P_E = 0;
  long guard = 0;
  double prefactor_log = 0.0;  // C used for the eigenvalue budget
  double predicted_digits = 0.0;
  std::optional<double> obtained_digits;
  std::optional<Real> reference_integral;
  std::optional<QuadPlan> reference_plan;
  long evaluations = 0;
  bool eigen_from_cache = false;
  double eigen_seconds = 0.0;
  double integrate_seconds = 0.0;
  double reference_seconds = 0.0;
};

/// Grid plan for state N of `spec` at P digits.
inline QuadPlan plan_for_state(const PotentialSpec& spec, long N, long P) {
  validate_spec(spec);
  if (auto* m = std::get_if<Monomial>(&spec)) return plan_monomial_state(m->n, N, P);
  if (N != 0) throw std::invalid_argument("double well: only the even ground state (N = 0) is supported");
  return plan_double_well(std::get<DoubleWell>(spec).s, P);
}

/// Amplitude prefactor C entering P_E = P + ceil(2C/ln10) + g. Zero for the
/// double well; x-dependent for the harmonic case.
inline Real amplitude_prefactor(const PotentialSpec& spec, long N, const QuadPlan& plan) {
  if (auto* m = std::get_if<Monomial>(&spec)) {
    if (m->n == 1) return harmonic_prefactor(wkb_energy(1, N), plan.x_max);
    return wkb_prefactor(m->n, N);
  }
  return Real(0L, kPlannerDigits);
}

inline long eigen_digits(long P, const Real& c_log, long guard) {
  long shift = (c_log * 2L / ln10(kPlannerDigits)).to_long_ceil();
  return P + std::max(0L, shift) + guard;
}

/// Digits of agreement between `value` and `reference`, capped at P + 45.
inline double obtained_precision(const Real& value, const Real& reference, long P) {
  if (reference.is_zero()) throw std::invalid_argument("obtained_precision: reference is zero");
  return agreement_digits(value, reference, static_cast<double>(P + kReferenceExtraDigits - 5));
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// E at P_E digits, from the cache when possible.
inline Real eigenvalue_for(const PotentialSpec& spec, long N, long P_E, const std::optional<std::filesystem::path>& cache_path,
                           const StepPolicy& policy, bool& from_cache) {
  std::optional<EigenCache> cache;
  if (cache_path) cache.emplace(*cache_path);
  std::string id = problem_id(spec);
  if (cache) {
    if (auto hit = cache->lookup(id, N, P_E)) {
      from_cache = true;
      return *hit;
    }
  }
  from_cache = false;
  RefineOptions ro;
  ro.policy = policy;
  EigenState st = refine_eigenvalue(spec, N, P_E, ro);
  if (cache) cache->store(id, N, P_E, st.E);
  return st.E;
}

inline Real integrate_psi_squared(const PotentialSpec& spec, const Real& E, long N, const QuadPlan& plan, Digits wp,
                                  unsigned threads, double scale, const StepPolicy& policy) {
  Parity parity = (std::holds_alternative<Monomial>(spec) && N % 2 == 1) ? Parity::odd : Parity::even;
  std::vector<Real> psi = psi_on_grid(spec, Real(E, wp), parity, plan, wp, threads, policy);
  Real factor(scale, wp);
  for (Real& v : psi) {
    if (scale != 1.0) v *= factor;
    v = square(v);
  }
  return symmetric_sum_from_samples(psi, plan, wp);
}

}  // namespace detail

/// Normalization integral of state N to P digits.
inline NormalizationResult normalize(const PotentialSpec& spec, long N, long P, const NormalizeOptions& opts = {}) {
  validate_spec(spec);
  if (N < 0) throw std::invalid_argument("state index N must be >= 0");
  if (P < 10) throw std::invalid_argument("normalize requires P >= 10");
  if (!(opts.sample_scale > 0.0)) throw std::invalid_argument("sample_scale must be positive");

  NormalizationResult res;
  res.P = P;
  res.plan = plan_for_state(spec, N, P);
  if (res.plan.evaluations() > opts.max_evaluations)
    throw BudgetExceeded("plan needs " + std::to_string(res.plan.evaluations()) + " evaluations, budget is " +
                         std::to_string(opts.max_evaluations));
  res.guard = res.plan.guard;
  Real c_log = amplitude_prefactor(spec, N, res.plan);
  res.prefactor_log = c_log.to_double();
  res.P_E = eigen_digits(P, c_log, res.guard);
  res.predicted_digits = res.plan.predicted_digits();

  // The reference run needs E to more digits; refine once at that level.
  long P_E_refine = res.P_E;
  if (opts.measure_obtained) {
    QuadPlan wider = plan_for_state(spec, N, P + kReferenceExtraDigits);
    res.reference_plan = refined_plan(res.plan, wider);
    if (res.reference_plan->evaluations() > 4 * opts.max_evaluations)
      throw BudgetExceeded("reference plan needs " + std::to_string(res.reference_plan->evaluations()) + " evaluations");
    P_E_refine = eigen_digits(P + kReferenceExtraDigits, amplitude_prefactor(spec, N, *res.reference_plan),
                              res.reference_plan->guard);
  }

  auto t0 = std::chrono::steady_clock::now();
  Real e_full = detail::eigenvalue_for(spec, N, P_E_refine, opts.cache_path, opts.policy, res.eigen_from_cache);
  res.eigen_seconds = detail::seconds_since(t0);
  res.E = Real(e_full, Digits(res.P_E));

  // psi is sampled at the eigenvalue precision: rounding E or psi below P_E
  // digits feeds the growing tail solution, which the amplitude C amplifies.
  const Digits wp(std::max(P + res.guard, res.P_E));
  auto main_run = [&] {
    auto t = std::chrono::steady_clock::now();
    Real v = detail::integrate_psi_squared(spec, res.E, N, res.plan, wp, std::max(1u, opts.threads / (opts.measure_obtained ? 2u : 1u)),
                                           opts.sample_scale, opts.policy);
    res.integrate_seconds = detail::seconds_since(t);
    return v;
  };
  auto ref_run = [&] {
    auto t = std::chrono::steady_clock::now();
    const QuadPlan& rp = *res.reference_plan;
    Real v = detail::integrate_psi_squared(spec, e_full, N, rp, Digits(std::max(P + kReferenceExtraDigits + rp.guard, P_E_refine)),
                                           std::max(1u, opts.threads - opts.threads / 2), opts.sample_scale, opts.policy);
    res.reference_seconds = detail::seconds_since(t);
    return v;
  };

  if (opts.measure_obtained && opts.threads >= 2) {
    auto ref_future = std::async(std::launch::async, ref_run);
    res.integral = main_run();
    res.reference_integral = ref_future.get();
  } else {
    res.integral = main_run();
    if (opts.measure_obtained) res.reference_integral = ref_run();
  }

  res.evaluations = res.plan.evaluations();
  res.norm_constant = Real(1L, wp) / sqrt(res.integral);
  if (res.reference_integral) res.obtained_digits = obtained_precision(res.integral, *res.reference_integral, P);
  return res;
}

}  // namespace trapnorm

#endif  // TRAPNORM_NORMALIZER_HPP
