// trapnorm: high-precision trapezoid integration and normalization integrals.
//
//   trapnorm integrate --model gauss --digits 50
//   trapnorm integrate --model In:1 --M 2 --rule trap
//   trapnorm normalize --potential x2n:2 --state 0 --digits 100
//   trapnorm bench --suite fig1 --out fig1.csv
//
// Exit status: 0 when the requested precision was delivered (obtained digits
// >= P - 2), 2 when it was not, 1 on usage or runtime errors.

#include <trapnorm/bench.hpp>
#include <trapnorm/trapnorm.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

using namespace trapnorm;

namespace {

constexpr int kExitShortfall = 2;

unsigned default_threads() {
  if (const char* env = std::getenv("TRAPNORM_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring malformed TRAPNORM_THREADS='" << env << "'\n";
  }
  return 1;
}

std::pair<std::string, std::string> split_tag(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos) return {text, ""};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("malformed " + what + " '" + text + "'");
}

using AnyModel = std::variant<ModelKind, FiniteModel>;

AnyModel parse_model(const std::string& text) {
  auto [tag, arg] = split_tag(text);
  if (tag == "gauss" && arg.empty()) return ModelKind{Gaussian{}};
  if (tag == "power") return ModelKind{Power{parse_int(arg, "power exponent")}};
  if (tag == "doublehump") return ModelKind{DoubleHump{Fraction::parse(arg)}};
  if (tag == "In") return FiniteModel{PolyBump{parse_int(arg, "I_n index")}};
  if (tag == "Jinf" && arg.empty()) return FiniteModel{TanhStep{}};
  throw std::invalid_argument("unknown model '" + text + "' (expected gauss, power:<n>, doublehump:<a>, In:<n>, Jinf)");
}

PotentialSpec parse_potential(const std::string& text) {
  auto [tag, arg] = split_tag(text);
  if (tag == "x2n") return Monomial{parse_int(arg, "potential exponent")};
  if (tag == "doublewell") return DoubleWell{Fraction::parse(arg)};
  throw std::invalid_argument("unknown potential '" + text + "' (expected x2n:<n> or doublewell:<p/q>)");
}

void write_rows(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file " + path);
  write_csv(out, rows);
}

struct IntegrateArgs {
  std::string model;
  std::optional<long> digits;
  std::optional<long> M;
  std::string rule = "trap";
  std::string csv;
  unsigned threads = 1;
};

int cmd_integrate(const IntegrateArgs& a) {
  AnyModel model = parse_model(a.model);
  const bool precision_requested = a.digits.has_value();
  long P = a.digits.value_or(50);
  if (P < 5) throw std::invalid_argument("--digits must be at least 5");
  BenchRow row{"integrate", a.model, P, "", 0, std::nullopt, std::nullopt, 0, 0.0, ""};
  double obtained = 0.0;
  auto t0 = std::chrono::steady_clock::now();

  if (auto* fm = std::get_if<FiniteModel>(&model)) {
    long M = a.M.value_or(64);
    const Digits wp(P + guard_digits(M));
    Integrand f = finite_integrand(*fm);
    Real lo(0L, wp), hi(1L, wp);
    QuadResult r{Real(wp), M, Real(wp), std::numeric_limits<double>::quiet_NaN(), 0};
    if (a.rule == "trap") r = extended_trapezoid(f, lo, hi, M, wp, a.threads);
    else if (a.rule == "simpson") r = extended_simpson(f, lo, hi, M, wp, a.threads);
    else if (a.rule == "em1") r = em_corrected_trapezoid(f, lo, hi, M, EmOptions{1}, wp, a.threads);
    else if (a.rule == "em2") r = em_corrected_trapezoid(f, lo, hi, M, EmOptions{2}, wp, a.threads);
    else throw std::invalid_argument("unknown rule '" + a.rule + "' (expected trap, simpson, em1, em2)");
    row.wall_time_ms = detail::elapsed_ms(t0);
    mpq_class exact_q = finite_exact(*fm);
    Real exact(exact_q, wp);
    obtained = agreement_digits(r.value, exact, static_cast<double>(P + 5));
    std::cout << "model      " << model_name(*fm) << " on [0, 1]\n"
              << "rule       " << a.rule << "  M=" << M << "  h=" << r.h.to_string(Digits(20)) << "\n"
              << "value      " << Real(r.value, Digits(P)).to_string(Digits(P)) << "\n"
              << "exact      " << exact_q.get_str() << " = " << exact.to_string(Digits(P)) << "\n"
              << "error      " << log10_relative_error(r.value, exact) << " (log10, relative)\n"
              << "P_obt      " << obtained << "\n"
              << "evals      " << r.evaluations << "\n";
    row.h = r.h.to_string(Digits(12));
    row.M = M;
    row.measured_log10_error = log10_relative_error(r.value, exact);
    row.evaluations = r.evaluations;
    row.value = r.value.to_string(Digits(P));
  } else {
    const ModelKind& kind = std::get<ModelKind>(model);
    if (a.rule != "trap") throw std::invalid_argument("infinite-range models use the trapezoid rule only (--rule trap)");
    QuadPlan plan;
    if (a.M) {
      if (std::holds_alternative<Gaussian>(kind)) plan = plan_power_fixed_M(1, *a.M);
      else if (auto* p = std::get_if<Power>(&kind)) plan = plan_power_fixed_M(p->n, *a.M);
      else {
        plan = plan_for(kind, P);
        plan.M = *a.M;
        plan.h = (plan.x_max - plan.x_min) / std::max(1L, *a.M);
        plan.guard = guard_digits(plan.M);
      }
    } else {
      plan = plan_for(kind, P);
    }
    const Digits wp(P + plan.guard);
    Integrand f = model_integrand(kind);
    QuadResult r = infinite_trapezoid(f, plan, wp, a.threads);
    row.wall_time_ms = detail::elapsed_ms(t0);
    ClosedForm cf = closed_form(kind, wp + 10);
    Real reference(wp);
    std::string ref_source;
    if (cf.value) {
      reference = *cf.value;
      ref_source = cf.source;
    } else {
      QuadPlan ref = refined_plan(plan, plan_for(kind, P + kReferenceExtraDigits));
      reference = infinite_trapezoid(f, ref, Digits(P + kReferenceExtraDigits + ref.guard), a.threads).value;
      ref_source = "refined reference run at P+50";
    }
    obtained = agreement_digits(r.value, reference, static_cast<double>(P + kReferenceExtraDigits - 5));
    double oracle_digits = -std::log10(std::fabs(r.value.to_double() - cf.oracle) / cf.oracle);
    std::cout << "model      " << model_name(kind) << " on (-inf, inf)\n"
              << "plan       " << plan.describe() << "\n"
              << "value      " << Real(r.value, Digits(P)).to_string(Digits(P)) << "\n"
              << "reference  " << ref_source << "\n"
              << "oracle     " << cf.oracle << " (" << cf.source << ", double); agreement " << oracle_digits
              << " digits\n"
              << "P_est      " << plan.predicted_digits() << "\n"
              << "P_obt      " << obtained << "\n"
              << "evals      " << r.evaluations << "\n";
    row.h = plan.h.to_string(Digits(12));
    row.M = plan.M;
    row.predicted_log10_error = plan.est_error_log10;
    row.measured_log10_error = -obtained;
    row.evaluations = r.evaluations;
    row.value = r.value.to_string(Digits(P));
  }
  std::cout << "time_ms    " << row.wall_time_ms << "\n";
  if (!a.csv.empty()) write_rows(a.csv, {row});
  if (precision_requested && obtained < static_cast<double>(P - 2)) {
    std::cerr << "reason=precision_shortfall requested=" << P << " obtained=" << obtained << "\n";
    return kExitShortfall;
  }
  return 0;
}

struct NormalizeArgs {
  std::string potential;
  long state = 0;
  long digits = 50;
  unsigned threads = 1;
  std::string csv;
  std::string cache = "./eigen.cache";
  long max_evaluations = 1'000'000;
};

int cmd_normalize(const NormalizeArgs& a) {
  PotentialSpec spec = parse_potential(a.potential);
  NormalizeOptions opts;
  opts.threads = a.threads;
  opts.max_evaluations = a.max_evaluations;
  if (!a.cache.empty()) opts.cache_path = a.cache;
  auto t0 = std::chrono::steady_clock::now();
  NormalizationResult r = normalize(spec, a.state, a.digits, opts);
  double ms = detail::elapsed_ms(t0);
  const Digits P(a.digits);
  double obtained = r.obtained_digits.value_or(0.0);
  std::cout << "potential  " << problem_id(spec) << "  state N=" << a.state << "\n"
            << "plan       " << r.plan.describe() << "\n"
            << "E          " << r.E.to_string(P) << "  (P_E=" << r.P_E << (r.eigen_from_cache ? ", cached" : "") << ")\n"
            << "integral   " << Real(r.integral, P).to_string(P) << "\n"
            << "norm_const " << Real(r.norm_constant, P).to_string(P) << "\n"
            << "P_est      " << r.predicted_digits << "\n"
            << "P_obt      " << obtained << "\n"
            << "evals      " << r.evaluations << "\n"
            << "time_ms    refine=" << r.eigen_seconds * 1e3 << " integrate=" << r.integrate_seconds * 1e3
            << " reference=" << r.reference_seconds * 1e3 << " total=" << ms << "\n";
  if (!a.csv.empty()) {
    BenchRow row{"normalize", problem_id(spec) + ":N" + std::to_string(a.state), a.digits,
                 r.plan.h.to_string(Digits(12)), r.plan.M, r.plan.est_error_log10,
                 r.obtained_digits ? std::optional<double>(-obtained) : std::nullopt, r.evaluations, ms,
                 r.norm_constant.to_string(P)};
    write_rows(a.csv, {row});
  }
  if (obtained < static_cast<double>(a.digits - 2)) {
    std::cerr << "reason=precision_shortfall requested=" << a.digits << " obtained=" << obtained << "\n";
    return kExitShortfall;
  }
  return 0;
}

struct BenchArgs {
  std::string suite;
  std::string out;
  unsigned threads = 1;
  std::string cache = "./eigen.cache";
  long max_digits = 400;
};

int cmd_bench(const BenchArgs& a) {
  BenchOptions opts;
  opts.threads = a.threads;
  opts.max_digits = a.max_digits;
  if (!a.cache.empty()) opts.cache_path = a.cache;
  {
    std::ofstream probe(a.out);
    if (!probe) throw std::runtime_error("cannot write CSV file " + a.out);
  }
  auto rows = run_bench(a.suite, opts);
  write_rows(a.out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-precision trapezoid integration and eigenfunction normalization"};
  app.require_subcommand(1);
  const unsigned threads_default = default_threads();

  IntegrateArgs ia;
  ia.threads = threads_default;
  auto* integrate = app.add_subcommand("integrate", "Integrate a model function");
  integrate->add_option("--model", ia.model, "gauss | power:<n> | doublehump:<a> | In:<n> | Jinf")->required();
  integrate->add_option("--digits", ia.digits, "Target precision P in decimal digits")->check(CLI::PositiveNumber);
  integrate->add_option("--M", ia.M, "Number of intervals (overrides the planner)")->check(CLI::NonNegativeNumber);
  integrate->add_option("--rule", ia.rule, "trap | simpson | em1 | em2 (finite-interval models)")
      ->check(CLI::IsMember({"trap", "simpson", "em1", "em2"}));
  integrate->add_option("--csv", ia.csv, "Write a result row in CSV form to this file");
  integrate->add_option("--threads", ia.threads, "Worker threads (default 1 or TRAPNORM_THREADS)")
      ->check(CLI::PositiveNumber);

  NormalizeArgs na;
  na.threads = threads_default;
  auto* norm = app.add_subcommand("normalize", "Normalization integral of an eigenfunction");
  norm->add_option("--potential", na.potential, "x2n:<n> | doublewell:<p/q>")->required();
  norm->add_option("--state", na.state, "State index N (node count)")->check(CLI::NonNegativeNumber);
  norm->add_option("--digits", na.digits, "Target precision P in decimal digits")->check(CLI::Range(10L, 100000L));
  norm->add_option("--threads", na.threads, "Worker threads (default 1 or TRAPNORM_THREADS)")->check(CLI::PositiveNumber);
  norm->add_option("--csv", na.csv, "Write a result row in CSV form to this file");
  norm->add_option("--cache", na.cache, "Eigenvalue cache file (empty string disables)");
  norm->add_option("--max-evaluations", na.max_evaluations, "Refuse plans needing more samples")
      ->check(CLI::PositiveNumber);

  BenchArgs ba;
  ba.threads = threads_default;
  auto* bench = app.add_subcommand("bench", "Run a built-in benchmark grid and write CSV");
  bench->add_option("--suite", ba.suite, "fig1 | fig2 | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  bench->add_option("--out", ba.out, "Output CSV path")->required();
  bench->add_option("--threads", ba.threads, "Worker threads (default 1 or TRAPNORM_THREADS)")->check(CLI::PositiveNumber);
  bench->add_option("--cache", ba.cache, "Eigenvalue cache file (empty string disables)");
  bench->add_option("--max-digits", ba.max_digits, "Skip grid points above this precision")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (integrate->parsed()) return cmd_integrate(ia);
    if (norm->parsed()) return cmd_normalize(na);
    if (bench->parsed()) return cmd_bench(ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
