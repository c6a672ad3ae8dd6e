#include <trapnorm/bigreal.hpp>

#include <gtest/gtest.h>

using namespace trapnorm;

namespace {

Real mpfr_pi(Digits d) {
  Real r(d);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

double digits_agree(const Real& a, const Real& b) {
  Real diff = abs(a - b);
  if (diff.is_zero()) return 1e9;
  return -(diff.log10_abs() - b.log10_abs());
}

}  // namespace

TEST(Digits, BitConversionRoundTrips) {
  for (long d : {1L, 10L, 50L, 333L, 1000L}) {
    EXPECT_GE(bits_to_digits(digits_to_bits(Digits(d))).value, d);
  }
  EXPECT_THROW(digits_to_bits(Digits(0)), std::invalid_argument);
}

TEST(Real, ArithmeticAndComparisons) {
  const Digits d(40);
  Real a(3L, d), b(4L, d);
  EXPECT_EQ(sqrt(square(a) + square(b)), 5L);
  EXPECT_TRUE(a < b);
  EXPECT_TRUE(a == 3);
  EXPECT_TRUE(a > 2.5);
  EXPECT_EQ(1L - a, -2L);
  EXPECT_EQ(12L / a, 4L);
  Real c = a;
  c *= b;
  c -= 2L;
  EXPECT_EQ(c, 10L);
}

TEST(Real, BinaryOpsUseTheWiderPrecision) {
  Real narrow(1L, Digits(20)), wide(3L, Digits(200));
  Real q = narrow / wide;
  EXPECT_GE(q.digits().value, 200);
  Real expect = Real(1L, Digits(200)) / 3L;
  EXPECT_EQ(q, expect);
}

TEST(Real, MoveLeavesSourceReusable) {
  Real a(7L, Digits(30));
  Real b(std::move(a));
  EXPECT_EQ(b, 7L);
  a = Real(2L, Digits(30));
  EXPECT_EQ(a, 2L);
}

TEST(Real, ParseAndPrint) {
  const Digits d(30);
  Real x = Real::parse("1.25", d);
  EXPECT_EQ(x.to_double(), 1.25);
  EXPECT_EQ(Real(1.25, Digits(5)).to_string(Digits(5)), "1.2500");
  EXPECT_EQ(Real(-0.0625, Digits(5)).to_string(Digits(3)), "-0.0625");
  EXPECT_EQ(Real(1e-30, Digits(5)).to_string(Digits(2)), "1.0e-30");
  EXPECT_THROW(Real::parse("abc", d), std::invalid_argument);
  Real big = pow10(120, Digits(10));
  EXPECT_NEAR(big.log10_abs(), 120.0, 1e-12);
}

TEST(Real, ElementaryFunctionsAgreeWithDouble) {
  const Digits d(30);
  Real x(0.7, d);
  EXPECT_NEAR(exp(x).to_double(), std::exp(0.7), 1e-15);
  EXPECT_NEAR(acosh(Real(2L, d)).to_double(), std::acosh(2.0), 1e-15);
  EXPECT_NEAR(tan(x).to_double(), std::tan(0.7), 1e-15);
  EXPECT_NEAR(pow(x, Real(1.5, d)).to_double(), std::pow(0.7, 1.5), 1e-15);
  EXPECT_NEAR(gamma(Real(0.25, d)).to_double(), std::tgamma(0.25), 1e-14);
}

TEST(Constants, PiMatchesMpfrToManyDigits) {
  for (long digits : {10L, 100L, 1000L}) {
    const Digits d(digits);
    EXPECT_GE(digits_agree(pi(d), mpfr_pi(d)), static_cast<double>(digits)) << digits;
  }
  EXPECT_EQ(pi(Digits(12)).to_string(Digits(12)), "3.14159265359");
}

TEST(Constants, AgmMatchesKnownValue) {
  // agm(1, sqrt 2) = 1.19814023473559220744...
  const Digits d(40);
  Real g = agm(Real(1L, d), sqrt(Real(2L, d)));
  EXPECT_EQ(g.to_string(Digits(21)), "1.19814023473559220744");
  EXPECT_THROW(agm(Real(1L, d), Real(-1L, d)), std::domain_error);
}

TEST(Constants, GammaQuarterMatchesMpfrGamma) {
  for (long digits : {20L, 150L, 500L}) {
    const Digits d(digits);
    Real oracle(d);
    mpfr_gamma(oracle.raw(), Real(0.25, d).raw(), MPFR_RNDN);
    EXPECT_GE(digits_agree(gamma_quarter(d), oracle), static_cast<double>(digits) - 1) << digits;
  }
  // Gamma(1/4)/2 = 1.812804954...
  EXPECT_EQ((gamma_quarter(Digits(20)) / 2L).to_string(Digits(10)), "1.812804954");
}

TEST(Constants, CachedValuesAreReroundedForLowerPrecision) {
  Real hi = pi(Digits(300));
  Real lo = pi(Digits(20));
  EXPECT_EQ(lo.digits().value, Digits(20).value);
  EXPECT_EQ(lo, Real(hi, Digits(20)));
}

TEST(Fraction, ParsesRationalsIntegersAndDecimals) {
  Fraction f = Fraction::parse("1/100");
  EXPECT_EQ(f.num, 1);
  EXPECT_EQ(f.den, 100);
  EXPECT_EQ(Fraction::parse("6/4").to_string(), "3/2");
  EXPECT_EQ(Fraction::parse("3").to_string(), "3");
  EXPECT_EQ(Fraction::parse("0.25").to_string(), "1/4");
  EXPECT_THROW(Fraction::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Fraction::parse("x"), std::invalid_argument);
  EXPECT_EQ(f.to_real(Digits(50)) * 100L, 1L);
}

TEST(Bernoulli, RatiosMatchTable) {
  EXPECT_EQ(bernoulli_ratio(1).to_string(), "1/12");
  EXPECT_EQ(bernoulli_ratio(2).to_string(), "-1/720");
  EXPECT_EQ(bernoulli_ratio(3).to_string(), "1/30240");
  EXPECT_EQ(bernoulli_ratio(4).to_string(), "-1/1209600");
  EXPECT_THROW(bernoulli_ratio(0), std::out_of_range);
  EXPECT_THROW(bernoulli_ratio(33), std::out_of_range);
}

TEST(Guard, GrowsWithLogOfSampleCount) {
  EXPECT_EQ(guard_digits(0), 20);
  EXPECT_EQ(guard_digits(9), 21);
  EXPECT_EQ(guard_digits(99), 22);
  EXPECT_EQ(guard_digits(100), 23);
}
