#ifndef TRAPNORM_BENCH_HPP
#define TRAPNORM_BENCH_HPP

// Built-in benchmark grids and their CSV rows.
//   fig1  trapezoid vs Simpson on I_n and J_inf over an h sweep
//   fig2  predicted vs obtained precision of the infinite-range models over M
//   fig3  wall time of eigenvalue refinement and normalization vs P
//   fig4  obtained minus estimated digits of the normalization integrals vs P

#include <trapnorm/analytic_models.hpp>
#include <trapnorm/bigreal.hpp>
#include <trapnorm/normalizer.hpp>
#include <trapnorm/quadrature.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace trapnorm {

struct BenchRow {
  std::string suite;
  std::string case_name;
  long digits = 0;
  std::string h;
  long M = 0;
  std::optional<double> predicted_log10_error;
  std::optional<double> measured_log10_error;
  long evaluations = 0;
  double wall_time_ms = 0.0;
  std::string value;
};

inline constexpr const char* kBenchHeader =
    "suite,case,digits,h,M,predicted_log10_error,measured_log10_error,evaluations,wall_time_ms,value";

inline std::string csv_line(const BenchRow& r) {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    std::ostringstream os;
    os << std::setprecision(6) << *v;
    return os.str();
  };
  std::ostringstream os;
  os << r.suite << ',' << r.case_name << ',' << r.digits << ',' << r.h << ',' << r.M << ','
     << num(r.predicted_log10_error) << ',' << num(r.measured_log10_error) << ',' << r.evaluations << ','
     << std::fixed << std::setprecision(3) << r.wall_time_ms << ",\"" << r.value << '"';
  return os.str();
}

inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

struct BenchOptions {
  unsigned threads = 1;
  std::optional<std::filesystem::path> cache_path;
  long max_digits = 400;
};

/// log10 of |value - exact| / |exact|; -inf when they agree exactly.
inline double log10_relative_error(const Real& value, const Real& exact) {
  Real diff = abs(value - exact);
  if (diff.is_zero()) return -std::numeric_limits<double>::infinity();
  return diff.log10_abs() - exact.log10_abs();
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline constexpr long kFig1Digits = 150;
inline const std::vector<long> kFig1M = {8, 16, 32, 64, 128};

/// Relative errors of T(h) and S(h) on [0, 1], h = 1/M. Simpson rows carry
/// error(T(2h))/3 as the prediction.
inline std::vector<BenchRow> bench_fig1(const BenchOptions& opts = {}) {
  std::vector<BenchRow> rows;
  const Digits wp(kFig1Digits);
  const std::vector<FiniteModel> models = {PolyBump{1}, PolyBump{4}, PolyBump{12}, TanhStep{}};
  Real a(0L, wp), b(1L, wp);
  for (const auto& model : models) {
    Integrand f = finite_integrand(model);
    Real exact(finite_exact(model), wp);
    for (long M : kFig1M) {
      auto t0 = std::chrono::steady_clock::now();
      QuadResult t = extended_trapezoid(f, a, b, M, wp, opts.threads);
      double t_ms = detail::elapsed_ms(t0);
      t0 = std::chrono::steady_clock::now();
      QuadResult s = extended_simpson(f, a, b, M, wp, opts.threads);
      double s_ms = detail::elapsed_ms(t0);
      QuadResult t2 = extended_trapezoid(f, a, b, M / 2, wp, opts.threads);
      double pred = log10_relative_error(t2.value, exact) - std::log10(3.0);
      std::string h = t.h.to_string(Digits(12));
      rows.push_back({"fig1", model_name(model) + ":trap", kFig1Digits, h, M, std::nullopt,
                      log10_relative_error(t.value, exact), t.evaluations, t_ms, t.value.to_string(Digits(40))});
      rows.push_back({"fig1", model_name(model) + ":simpson", kFig1Digits, h, M, pred,
                      log10_relative_error(s.value, exact), s.evaluations, s_ms, s.value.to_string(Digits(40))});
    }
  }
  return rows;
}

/// Gaussian and e^{-x^4} at fixed M against their closed forms; the
/// double hump (a = 1) over a P sweep against a P + 50 reference.
inline std::vector<BenchRow> bench_fig2(const BenchOptions& opts = {}) {
  std::vector<BenchRow> rows;
  auto run_closed = [&](const ModelKind& kind, int n, const std::vector<long>& sizes) {
    Integrand f = model_integrand(kind);
    for (long m1 : sizes) {
      QuadPlan plan = plan_power_fixed_M(n, m1 - 1);
      if (plan.predicted_digits() > static_cast<double>(opts.max_digits)) continue;
      const Digits wp(static_cast<long>(plan.predicted_digits()) + 30);
      Real exact = *closed_form(kind, wp + 10).value;
      auto t0 = std::chrono::steady_clock::now();
      QuadResult r = infinite_trapezoid(f, plan, wp, opts.threads);
      double ms = detail::elapsed_ms(t0);
      rows.push_back({"fig2", model_name(kind), plan.target_digits, plan.h.to_string(Digits(12)), plan.M,
                      plan.est_error_log10, log10_relative_error(r.value, exact), r.evaluations, ms,
                      r.value.to_string(Digits(40))});
    }
  };
  run_closed(Gaussian{}, 1, {5, 10, 20, 40, 80, 120});
  run_closed(Power{2}, 2, {5, 10, 20, 40, 80, 120});

  ModelKind hump = DoubleHump{Fraction{1, 1}};
  Integrand f = model_integrand(hump);
  for (long P : {10L, 20L, 40L, 60L, 80L, 100L}) {
    if (P > opts.max_digits) continue;
    QuadPlan plan = plan_for(hump, P);
    QuadPlan ref = refined_plan(plan, plan_for(hump, P + kReferenceExtraDigits));
    const Digits wp(P + plan.guard + 10);
    auto t0 = std::chrono::steady_clock::now();
    QuadResult r = infinite_trapezoid(f, plan, wp, opts.threads);
    double ms = detail::elapsed_ms(t0);
    QuadResult rr = infinite_trapezoid(f, ref, Digits(P + kReferenceExtraDigits + ref.guard), opts.threads);
    rows.push_back({"fig2", model_name(hump), P, plan.h.to_string(Digits(12)), plan.M, plan.est_error_log10,
                    log10_relative_error(r.value, rr.value), r.evaluations, ms, r.value.to_string(Digits(40))});
  }
  return rows;
}

struct StateCase {
  std::string name;
  PotentialSpec spec;
  long N;
  std::vector<long> digits;
};

inline std::vector<StateCase> state_cases() {
  return {{"E0", Monomial{2}, 0, {25, 50, 100, 200}},
          {"E100", Monomial{2}, 100, {25, 50, 100}},
          {"EWW", DoubleWell{Fraction{1, 100}}, 0, {25, 50, 100, 200}}};
}

/// Normalization runs for fig3 (timings) and fig4 (obtained vs estimated).
inline std::vector<BenchRow> bench_states(const std::string& suite, const BenchOptions& opts = {}) {
  if (suite != "fig3" && suite != "fig4") throw std::invalid_argument("bench_states: suite must be fig3 or fig4");
  std::vector<BenchRow> rows;
  NormalizeOptions no;
  no.threads = opts.threads;
  no.cache_path = opts.cache_path;
  for (const auto& c : state_cases()) {
    // Largest P first: its eigenvalue is cached and serves the smaller runs.
    std::vector<long> grid = c.digits;
    std::sort(grid.rbegin(), grid.rend());
    std::size_t first = rows.size();
    for (long P : grid) {
      if (P > opts.max_digits) continue;
      auto t0 = std::chrono::steady_clock::now();
      NormalizationResult r = normalize(c.spec, c.N, P, no);
      double total_ms = detail::elapsed_ms(t0);
      std::string h = r.plan.h.to_string(Digits(12));
      std::string value = r.integral.to_string(Digits(40));
      std::optional<double> measured;
      if (r.obtained_digits) measured = -*r.obtained_digits;
      if (suite == "fig3") {
        rows.push_back({suite, c.name + ":refine", P, h, r.plan.M, std::nullopt, std::nullopt, 0,
                        r.eigen_seconds * 1e3, r.E.to_string(Digits(40))});
        rows.push_back({suite, c.name + ":integrate", P, h, r.plan.M, r.plan.est_error_log10, measured,
                        r.evaluations, r.integrate_seconds * 1e3, value});
      } else {
        rows.push_back({suite, c.name, P, h, r.plan.M, r.plan.est_error_log10, measured, r.evaluations, total_ms,
                        value});
      }
    }
    std::stable_sort(rows.begin() + static_cast<std::ptrdiff_t>(first), rows.end(),
                     [](const BenchRow& x, const BenchRow& y) { return x.digits < y.digits; });
  }
  return rows;
}

inline std::vector<BenchRow> run_bench(const std::string& suite, const BenchOptions& opts = {}) {
  if (suite == "fig1") return bench_fig1(opts);
  if (suite == "fig2") return bench_fig2(opts);
  if (suite == "fig3" || suite == "fig4") return bench_states(suite, opts);
  throw std::invalid_argument("unknown suite '" + suite + "' (expected fig1, fig2, fig3 or fig4)");
}

}  // namespace trapnorm

#endif  // TRAPNORM_BENCH_HPP
