#include <trapnorm/analytic_models.hpp>
#include <trapnorm/quadrature.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace trapnorm;

namespace {

const Digits kWp(60);

Integrand poly(std::function<Real(const Real&)> fn) {
  Integrand f;
  f.eval = std::move(fn);
  return f;
}

Real R(long v) { return Real(v, kWp); }

double log10_rel(const Real& v, const Real& exact) {
  Real d = abs(v - exact);
  return d.is_zero() ? -1e9 : d.log10_abs() - exact.log10_abs();
}

}  // namespace

TEST(BasicRules, ExactnessExamples) {
  auto id = poly([](const Real& x) { return x; });
  auto cube = poly([](const Real& x) { return pow(x, 3L); });
  auto sixth = poly([](const Real& x) { return pow(x, 6L); });
  EXPECT_EQ(apply_basic_rule(BasicRule::trapezoid, id, R(0), R(1), kWp), Real(1L, kWp) / 2L);
  EXPECT_EQ(apply_basic_rule(BasicRule::simpson, cube, R(0), R(1), kWp), Real(1L, kWp) / 4L);
  EXPECT_EQ(apply_basic_rule(BasicRule::simpson38, cube, R(0), R(1), kWp), Real(1L, kWp) / 4L);
  auto quintic = poly([](const Real& x) { return pow(x, 5L); });
  EXPECT_EQ(apply_basic_rule(BasicRule::boole, quintic, R(0), R(1), kWp), Real(1L, kWp) / 6L);
  Real b6 = apply_basic_rule(BasicRule::boole, sixth, R(0), R(1), kWp);
  EXPECT_FALSE(b6 == Real(1L, kWp) / 7L);
  EXPECT_THROW(apply_basic_rule(BasicRule::trapezoid, id, R(1), R(1), kWp), std::invalid_argument);
}

TEST(ExtendedTrapezoid, ParabolaWithTwoIntervals) {
  auto f = finite_integrand(PolyBump{1});
  QuadResult r = extended_trapezoid(f, R(0), R(1), 2, kWp);
  EXPECT_EQ(r.value, Real(0.625, kWp));
  EXPECT_EQ(r.evaluations, 3);
  EXPECT_THROW(extended_trapezoid(f, R(0), R(1), 0, kWp), std::invalid_argument);
}

TEST(ExtendedTrapezoid, TanhStepIsOne) {
  auto f = finite_integrand(TanhStep{});
  QuadResult r = extended_trapezoid(f, R(0), R(1), 512, kWp);
  EXPECT_LT(log10_rel(r.value, R(1)), -12.0);
}

TEST(ExtendedTrapezoid, TanhStepIsSymmetricAboutTheMidpoint) {
  // f(x) + f(1 - x) = 2, so every uniform grid integrates it exactly.
  auto f = finite_integrand(TanhStep{});
  for (double x : {0.0, 0.1, 0.37, 0.5}) {
    Real sum = f(Real(x, kWp)) + f(Real(1L, kWp) - Real(x, kWp));
    EXPECT_LT(abs(sum - 2L).to_double(), 1e-55) << x;
  }
  EXPECT_EQ(f(R(0)), 2L);
  EXPECT_EQ(f(R(1)), 0L);
}

TEST(ExtendedSimpson, QuadraticIsExact) {
  auto sq = poly([](const Real& x) { return square(x); });
  EXPECT_EQ(extended_simpson(sq, R(0), R(1), 2, kWp).value, Real(1L, kWp) / 3L);
  EXPECT_THROW(extended_simpson(sq, R(0), R(1), 3, kWp), std::invalid_argument);
  EXPECT_THROW(extended_simpson(sq, R(0), R(1), 0, kWp), std::invalid_argument);
}

TEST(ExtendedSimpson, RichardsonIdentityIsBitExact) {
  for (const FiniteModel& m : {FiniteModel{PolyBump{4}}, FiniteModel{PolyBump{12}}, FiniteModel{TanhStep{}}}) {
    auto f = finite_integrand(m);
    for (long M : {2L, 4L, 10L, 64L}) {
      Real s = extended_simpson(f, R(0), R(1), M, kWp).value;
      Real t1 = extended_trapezoid(f, R(0), R(1), M, kWp).value;
      Real t2 = extended_trapezoid(f, R(0), R(1), M / 2, kWp).value;
      EXPECT_TRUE(s == simpson_from_trapezoids(t1, t2)) << model_name(m) << " M=" << M;
    }
  }
}

TEST(ExtendedSimpson, WeightsAreOneFourTwoFourOne) {
  auto ex = poly([](const Real& x) { return exp(x); });
  const long M = 8;
  Real h = Real(1L, kWp) / M;
  Real acc(kWp);
  for (long m = 0; m <= M; ++m) {
    long w = (m == 0 || m == M) ? 1 : (m % 2 ? 4 : 2);
    acc += exp(h * m) * w;
  }
  Real direct = acc * h / 3L;
  EXPECT_LT(log10_rel(extended_simpson(ex, R(0), R(1), M, kWp).value, direct), -55.0);
}

TEST(ExtendedSimpson, ErrorTracksTrapezoidAtTwiceTheStep) {
  auto f = finite_integrand(PolyBump{12});
  Real exact(finite_exact(PolyBump{12}), kWp);
  Real s = extended_simpson(f, R(0), R(1), 64, kWp).value;
  Real t2 = extended_trapezoid(f, R(0), R(1), 32, kWp).value;
  double ratio = (abs(s - exact) / (abs(t2 - exact) / 3L)).to_double();
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST(ExtendedSimpson, LeadingCoefficientIsPlusOneOver180) {
  // S(h) - I ~ c [f'''(1) - f'''(0)] h^4 with c = +1/180 for e^x.
  auto ex = poly([](const Real& x) { return exp(x); });
  const Digits wp(50);
  Real exact = exp(Real(1L, wp)) - 1L;
  Real d3 = exact;  // f'''(1) - f'''(0) = e - 1
  for (long M : {64L, 128L}) {
    Real h = Real(1L, wp) / M;
    Real err = extended_simpson(ex, Real(0L, wp), Real(1L, wp), M, wp).value - exact;
    double c = (err / (d3 * pow(h, 4L))).to_double();
    EXPECT_NEAR(c, 1.0 / 180.0, 0.05 / 180.0) << M;
  }
}

TEST(EndpointDerivative, Examples) {
  auto sq = poly([](const Real& x) { return square(x); });
  auto cube = poly([](const Real& x) { return pow(x, 3L); });
  for (double delta : {0.01, 0.1, 0.2}) {
    Real d = endpoint_derivative(sq, R(1), R(1), DerivativeScheme::central, Real(delta, kWp));
    EXPECT_LT(abs(d - 2L).to_double(), 1e-50) << delta;
  }
  // forward: f' - delta^2 f'''/3 = 0 - 0.01 * 6 / 3
  Real fwd = endpoint_derivative(cube, R(0), R(1), DerivativeScheme::forward, Real(1L, kWp) / 10L);
  EXPECT_LT(abs(fwd + Real(2L, kWp) / 100L).to_double(), 1e-50);
  // backward at x = 1: 3 - 0.02
  Real bwd = endpoint_derivative(cube, R(1), R(1), DerivativeScheme::backward, Real(1L, kWp) / 10L);
  EXPECT_LT(abs(bwd - Real(298L, kWp) / 100L).to_double(), 1e-50);
  // central: f' + delta^2 f'''/6
  Real cen = endpoint_derivative(cube, R(0), R(1), DerivativeScheme::central, Real(1L, kWp) / 10L);
  EXPECT_LT(abs(cen - Real(1L, kWp) / 100L).to_double(), 1e-50);
}

TEST(EndpointDerivative, RejectsBadSpacing) {
  auto sq = poly([](const Real& x) { return square(x); });
  EXPECT_THROW(endpoint_derivative(sq, R(0), R(1), DerivativeScheme::forward, R(0)), std::invalid_argument);
  EXPECT_THROW(endpoint_derivative(sq, R(0), Real(0.1, kWp), DerivativeScheme::central, Real(0.05, kWp)),
               std::invalid_argument);
}

TEST(EulerMaclaurin, PeriodicDerivativesGiveNoCorrection) {
  // f = sin^2(pi x): f'(0) = f'(1) = 0 and the central stencil is exact by symmetry.
  auto f = poly([](const Real& x) { return square(sin(pi(x.digits()) * x)); });
  EmOptions opts{1, EndpointStencil::central, Real(1L, kWp) / 100L};
  QuadResult em = em_corrected_trapezoid(f, R(0), R(1), 16, opts, kWp);
  QuadResult t = extended_trapezoid(f, R(0), R(1), 16, kWp);
  EXPECT_LT(abs(em.value - t.value).to_double(), 1e-55);
}

TEST(EulerMaclaurin, FirstCorrectionGainsTwoDigitsOnExp) {
  auto ex = poly([](const Real& x) { return exp(x); });
  Real exact = exp(R(1)) - 1L;
  QuadResult t = extended_trapezoid(ex, R(0), R(1), 16, kWp);
  QuadResult em = em_corrected_trapezoid(ex, R(0), R(1), 16, EmOptions{1}, kWp);
  EXPECT_GT((abs(t.value - exact) / abs(em.value - exact)).to_double(), 100.0);
}

TEST(EulerMaclaurin, SecondOrderLeavesAFifthOrderStencilTerm) {
  // With delta = h/sqrt(20) the h^4 terms cancel; the one-sided stencils leave
  // -(h^2/12)(delta^3/4)(f(a) + f(b)) = -(1 + e)/(48 * 20^{3/2}) h^5 for e^x.
  auto ex = poly([](const Real& x) { return exp(x); });
  Real exact = exp(R(1)) - 1L;
  Real c5 = -(exact + 2L) / (sqrt(R(20)) * 960L);
  double prev = 1.0;
  for (long M : {64L, 256L, 1024L, 4096L}) {
    QuadResult em = em_corrected_trapezoid(ex, R(0), R(1), M, EmOptions{2}, kWp);
    Real h = R(1) / M;
    double rel = ((em.value - exact) / pow(h, 5L) / c5 - 1L).to_double();
    EXPECT_LT(std::fabs(rel), 2.0 / static_cast<double>(M)) << M;
    EXPECT_LT(std::fabs(rel), prev) << M;
    prev = std::fabs(rel);
  }
}

TEST(EulerMaclaurin, RejectsUnsupportedConfigurations) {
  auto ex = poly([](const Real& x) { return exp(x); });
  EXPECT_THROW(em_corrected_trapezoid(ex, R(0), R(1), 3, EmOptions{1}, kWp), std::invalid_argument);
  EXPECT_THROW(em_corrected_trapezoid(ex, R(0), R(1), 16, EmOptions{3}, kWp), std::invalid_argument);
  EXPECT_THROW(em_corrected_trapezoid(ex, R(0), R(1), 16, EmOptions{2, EndpointStencil::central}, kWp),
               std::invalid_argument);
  EXPECT_THROW(em_corrected_trapezoid(ex, R(0), R(1), 16, EmOptions{2, EndpointStencil::one_sided, R(1) / 50L}, kWp),
               std::invalid_argument);
  auto tanh_step = finite_integrand(TanhStep{});
  EXPECT_THROW(em_corrected_trapezoid(tanh_step, R(0), R(1), 16, EmOptions{1, EndpointStencil::central, R(1) / 100L},
                                      kWp),
               std::invalid_argument);
}

TEST(InfiniteTrapezoid, PoissonDefectAtUnitStep) {
  QuadPlan plan;
  plan.h = Real(1L, kPlannerDigits);
  plan.x_min = Real(0L, kPlannerDigits);
  plan.x_max = Real(8L, kPlannerDigits);
  plan.M = 8;
  QuadResult r = infinite_trapezoid(model_integrand(Gaussian{}), plan, kWp);
  double defect = (r.value - sqrt(pi(kWp))).to_double();
  EXPECT_NEAR(defect, 1.83e-4, 0.01e-4);
  EXPECT_NEAR(defect / (std::sqrt(4 * M_PI) * std::exp(-M_PI * M_PI)), 1.0, 1e-3);
}

TEST(InfiniteTrapezoid, PoissonLawAcrossSteps) {
  for (double hd : {0.7, 0.8, 0.9, 1.0, 1.1, 1.2}) {
    QuadPlan plan;
    plan.h = Real(hd, kPlannerDigits);
    plan.x_min = Real(0L, kPlannerDigits);
    plan.M = static_cast<long>(std::ceil(12.0 / hd));
    plan.x_max = plan.h * plan.M;
    QuadResult r = infinite_trapezoid(model_integrand(Gaussian{}), plan, kWp);
    double ratio = std::fabs((r.value - sqrt(pi(kWp))).to_double()) / (std::sqrt(4 * M_PI) * std::exp(-M_PI * M_PI / (hd * hd)));
    EXPECT_GE(ratio, 0.9) << hd;
    EXPECT_LE(ratio, 1.1) << hd;
  }
}

TEST(InfiniteTrapezoid, DegenerateSingleSample) {
  QuadPlan plan;
  plan.h = Real(2L, kPlannerDigits);
  plan.x_min = Real(0L, kPlannerDigits);
  plan.x_max = Real(1L, kPlannerDigits);
  plan.M = 0;
  QuadResult r = infinite_trapezoid(model_integrand(Gaussian{}), plan, kWp);
  EXPECT_EQ(r.value, 2L);
  EXPECT_EQ(r.evaluations, 1);
}

TEST(InfiniteTrapezoid, RejectsMalformedPlansAndOddIntegrands) {
  QuadPlan plan = plan_gaussian(20);
  QuadPlan bad = plan;
  bad.h = Real(0L, kPlannerDigits);
  EXPECT_THROW(infinite_trapezoid(model_integrand(Gaussian{}), bad, kWp), std::invalid_argument);
  bad = plan;
  bad.x_max = Real(-1L, kPlannerDigits);
  EXPECT_THROW(infinite_trapezoid(model_integrand(Gaussian{}), bad, kWp), std::invalid_argument);
  Integrand odd = model_integrand(Gaussian{});
  odd.parity = Parity::odd;
  EXPECT_THROW(infinite_trapezoid(odd, plan, kWp), std::invalid_argument);
}

TEST(Determinism, IdenticalDigitsForAnyWorkerCount) {
  QuadPlan plan = plan_power(3, 60);
  Integrand f = model_integrand(Power{3});
  const Digits wp(60 + plan.guard);
  std::string base = infinite_trapezoid(f, plan, wp, 1).value.to_string(wp);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(infinite_trapezoid(f, plan, wp, w).value.to_string(wp), base) << w;
  auto g = finite_integrand(PolyBump{7});
  std::string tb = extended_trapezoid(g, R(0), R(1), 100, kWp, 1).value.to_string(kWp);
  EXPECT_EQ(extended_trapezoid(g, R(0), R(1), 100, kWp, 8).value.to_string(kWp), tb);
}

TEST(Determinism, TranslationCovariance) {
  // f(x - c) on [a + c, b + c] with dyadic c gives the same samples, hence the same digits.
  auto f = poly([](const Real& x) { return exp(-square(x)); });
  const Real c = Real(3L, kWp) / 4L;
  auto shifted = poly([c](const Real& x) { return exp(-square(x - c)); });
  Real a(-2L, kWp), b(2L, kWp);
  std::string v0 = extended_trapezoid(f, a, b, 32, kWp).value.to_string(kWp);
  std::string v1 = extended_trapezoid(shifted, a + c, b + c, 32, kWp).value.to_string(kWp);
  EXPECT_EQ(v0, v1);
}

TEST(Sampling, OrderedSumIndependentOfPartition) {
  std::vector<Real> terms;
  for (long k = 1; k <= 50; ++k) terms.push_back(Real(1L, kWp) / (k * k));
  Real s = ordered_sum(terms, kWp);
  Real manual(kWp);
  for (const auto& t : terms) manual += t;
  EXPECT_TRUE(s == manual);
  auto v = sample_indexed(10, 4, [](std::size_t i) { return Real(static_cast<long>(i), Digits(20)); });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<long>(i));
  EXPECT_THROW(sample_indexed(5, 3, [](std::size_t i) -> Real {
                 if (i == 3) throw std::runtime_error("boom");
                 return Real(0L, Digits(10));
               }),
               std::runtime_error);
}
