#ifndef TRAPNORM_BIGREAL_HPP
#define TRAPNORM_BIGREAL_HPP

// Arbitrary-precision reals with an explicit decimal working precision.
//
// Digit arithmetic is delegated to MPFR; every value carries its own
// precision and binary operations produce a result at the larger of the two
// operand precisions. The constants pi, agm and Gamma(1/4) are computed here
// by quadratically convergent AGM iterations.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trapnorm {

inline constexpr double kBitsPerDigit = 3.3219280948873623;  // log2(10)
inline constexpr mpfr_prec_t kExtraBits = 4;

/// Decimal digits of working precision.
struct Digits {
  long value;
  constexpr explicit Digits(long v) : value(v) {}
  friend constexpr auto operator<=>(Digits, Digits) = default;
  friend constexpr Digits operator+(Digits d, long extra) { return Digits(d.value + extra); }
};

inline mpfr_prec_t digits_to_bits(Digits d) {
  if (d.value < 1) throw std::invalid_argument("precision must be at least one decimal digit");
  return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(d.value) * kBitsPerDigit)) + kExtraBits;
}

inline Digits bits_to_digits(mpfr_prec_t bits) {
  return Digits(std::max<long>(1, static_cast<long>(std::floor(static_cast<double>(bits - kExtraBits) / kBitsPerDigit))));
}

class Real {
 public:
  explicit Real(Digits d = Digits(30)) { init(digits_to_bits(d)); mpfr_set_zero(v_, 1); }
  Real(long value, Digits d) { init(digits_to_bits(d)); mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(int value, Digits d) : Real(static_cast<long>(value), d) {}
  Real(double value, Digits d) { init(digits_to_bits(d)); mpfr_set_d(v_, value, MPFR_RNDN); }
  Real(const mpq_class& q, Digits d) { init(digits_to_bits(d)); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  /// Copies `other` and rounds it to `d` digits.
  Real(const Real& other, Digits d) { init(digits_to_bits(d)); mpfr_set(v_, other.v_, MPFR_RNDN); }

  static Real with_bits(mpfr_prec_t bits) {
    Real r(RawTag{}, bits);
    mpfr_set_zero(r.v_, 1);
    return r;
  }

  /// Parses a decimal string (optional sign, digits, '.', digits, optional exponent).
  static Real parse(std::string_view text, Digits d) {
    Real r(d);
    std::string s(text);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("malformed decimal number: '" + s + "'");
    return r;
  }

  Real(const Real& o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    std::memcpy(v_, o.v_, sizeof(v_));
    o.v_->_mpfr_d = nullptr;
  }
  Real& operator=(const Real& o) {
    if (this == &o) return *this;
    if (!live()) init(mpfr_get_prec(o.v_));
    else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this == &o) return *this;
    if (live()) mpfr_clear(v_);
    std::memcpy(v_, o.v_, sizeof(v_));
    o.v_->_mpfr_d = nullptr;
    return *this;
  }
  ~Real() {
    if (live()) mpfr_clear(v_);
  }

  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
  Digits digits() const { return bits_to_digits(bits()); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long_floor() const { return mpfr_get_si(v_, MPFR_RNDD); }
  long to_long_ceil() const { return mpfr_get_si(v_, MPFR_RNDU); }

  /// log10 |x|, finite for any non-zero value regardless of exponent range.
  double log10_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398120;
  }

  /// Decimal string with `d` significant digits. Plain notation for moderate
  /// exponents, otherwise mantissa 'e' exponent.
  std::string to_string(Digits d) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
    if (is_zero()) return "0." + std::string(static_cast<std::size_t>(std::max<long>(d.value - 1, 1)), '0');
    mpfr_exp_t e10 = 0;
    char* buf = mpfr_get_str(nullptr, &e10, 10, static_cast<std::size_t>(d.value), v_, MPFR_RNDN);
    std::string mant(buf);
    mpfr_free_str(buf);
    std::string sign_str;
    if (mant.front() == '-') {
      sign_str = "-";
      mant.erase(mant.begin());
    }
    // value = 0.mant * 10^e10
    std::string out;
    if (e10 >= 1 && e10 <= static_cast<mpfr_exp_t>(mant.size())) {
      out = mant.substr(0, static_cast<std::size_t>(e10)) + "." + mant.substr(static_cast<std::size_t>(e10));
      if (out.back() == '.') out += "0";
    } else if (e10 <= 0 && e10 > -6) {
      out = "0." + std::string(static_cast<std::size_t>(-e10), '0') + mant;
    } else {
      out = mant.substr(0, 1) + "." + (mant.size() > 1 ? mant.substr(1) : std::string("0")) + "e" +
            std::to_string(static_cast<long>(e10 - 1));
    }
    return sign_str + out;
  }

  Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(long o) { mpfr_add_si(v_, v_, o, MPFR_RNDN); return *this; }
  Real& operator-=(long o) { mpfr_sub_si(v_, v_, o, MPFR_RNDN); return *this; }
  Real& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
  Real& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }

  Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator-(long a, const Real& b) {
    Real r = Real::with_bits(b.bits());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r = Real::with_bits(b.bits());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
  }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b) {
    int c = mpfr_cmp_si(a.v_, b);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
  }
  friend bool operator==(const Real& a, int b) { return a == static_cast<long>(b); }
  friend std::partial_ordering operator<=>(const Real& a, int b) { return a <=> static_cast<long>(b); }
  friend std::partial_ordering operator<=>(const Real& a, double b) {
    int c = mpfr_cmp_d(a.v_, b);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
  }

  template <class Fn>
  static Real unary(const Real& a, Fn fn) {
    Real r = Real::with_bits(a.bits());
    fn(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

 private:
  struct RawTag {};
  Real(RawTag, mpfr_prec_t bits) { init(bits); }

  void init(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  bool live() const { return v_->_mpfr_d != nullptr; }
  void widen(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  template <class Op>
  static Real binary(const Real& a, const Real& b, Op op) {
    Real r = Real::with_bits(std::max(a.bits(), b.bits()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

inline Real sqrt(const Real& x) { return Real::unary(x, mpfr_sqrt); }
inline Real exp(const Real& x) { return Real::unary(x, mpfr_exp); }
inline Real log(const Real& x) { return Real::unary(x, mpfr_log); }
inline Real log10(const Real& x) { return Real::unary(x, mpfr_log10); }
inline Real sinh(const Real& x) { return Real::unary(x, mpfr_sinh); }
inline Real cosh(const Real& x) { return Real::unary(x, mpfr_cosh); }
inline Real tanh(const Real& x) { return Real::unary(x, mpfr_tanh); }
inline Real asinh(const Real& x) { return Real::unary(x, mpfr_asinh); }
inline Real acosh(const Real& x) { return Real::unary(x, mpfr_acosh); }
inline Real sin(const Real& x) { return Real::unary(x, mpfr_sin); }
inline Real cos(const Real& x) { return Real::unary(x, mpfr_cos); }
inline Real tan(const Real& x) { return Real::unary(x, mpfr_tan); }
inline Real atan(const Real& x) { return Real::unary(x, mpfr_atan); }
inline Real abs(const Real& x) { return Real::unary(x, mpfr_abs); }
inline Real gamma(const Real& x) { return Real::unary(x, mpfr_gamma); }

inline Real pow(const Real& x, const Real& y) {
  Real r = Real::with_bits(std::max(x.bits(), y.bits()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, long k) {
  Real r = Real::with_bits(x.bits());
  mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}
inline Real square(const Real& x) { return Real::unary(x, mpfr_sqr); }
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

/// x rounded to `d` digits.
inline Real round_to(const Real& x, Digits d) { return Real(x, d); }

/// 10^-k at precision d.
inline Real pow10(long k, Digits d) {
  Real r(d);
  mpfr_ui_pow_ui(r.raw(), 10UL, static_cast<unsigned long>(std::labs(k)), MPFR_RNDN);
  if (k < 0) mpfr_ui_div(r.raw(), 1UL, r.raw(), MPFR_RNDN);
  return r;
}

/// Exact rational with small numerator/denominator, e.g. s = 1/100.
struct Fraction {
  long num = 0;
  long den = 1;

  Fraction() = default;
  Fraction(long n, long d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("fraction with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long g = std::gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  /// Accepts "p/q", an integer, or a terminating decimal such as "0.25".
  static Fraction parse(std::string_view text) {
    std::string s(text);
    auto fail = [&] { return std::invalid_argument("malformed fraction: '" + s + "'"); };
    try {
      std::size_t used = 0;
      if (auto slash = s.find('/'); slash != std::string::npos) {
        long n = std::stol(s.substr(0, slash), &used);
        if (used != slash) throw fail();
        std::string rest = s.substr(slash + 1);
        long d = std::stol(rest, &used);
        if (used != rest.size()) throw fail();
        return Fraction(n, d);
      }
      if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        if (frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos) throw fail();
        long scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        std::string whole = s.substr(0, dot);
        bool neg = !whole.empty() && whole[0] == '-';
        long w = whole.empty() || whole == "-" || whole == "+" ? 0 : std::stol(whole, &used);
        long f = frac.empty() ? 0 : std::stol(frac);
        long n = std::labs(w) * scale + f;
        return Fraction(neg ? -n : n, scale);
      }
      long n = std::stol(s, &used);
      if (used != s.size()) throw fail();
      return Fraction(n, 1);
    } catch (const std::logic_error&) {
      throw fail();
    }
  }

  Real to_real(Digits d) const {
    Real r(num, d);
    r /= den;
    return r;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// ---------------------------------------------------------------------------
// Constants.

namespace detail {

/// Process-wide cache of the most precise value computed so far.
class ConstantCache {
 public:
  template <class Compute>
  Real get(Digits d, Compute compute) {
    std::lock_guard lock(mutex_);
    mpfr_prec_t want = digits_to_bits(d);
    if (!best_ || best_->bits() < want) best_ = compute(d);
    return Real(*best_, d);
  }

 private:
  std::mutex mutex_;
  std::optional<Real> best_;
};

}  // namespace detail

/// Arithmetic-geometric mean, iterated until |a-b| < 10^-P a, P the larger
/// operand precision.
inline Real agm(const Real& a0, const Real& b0) {
  if (!(a0 > 0L) || !(b0 > 0L)) throw std::domain_error("agm requires positive arguments");
  Digits d = std::max(a0.digits(), b0.digits());
  Digits work = d + 10;
  Real a(a0, work), b(b0, work);
  Real tol = pow10(-d.value, work);
  for (int it = 0; it < 100000; ++it) {
    if (abs(a - b) < tol * a) break;
    Real next_a = (a + b) / 2L;
    b = sqrt(a * b);
    a = std::move(next_a);
  }
  return Real((a + b) / 2L, d);
}

namespace detail {

// Gauss-Legendre (Brent-Salamin) iteration.
inline Real compute_pi(Digits d) {
  Digits work = d + 15;
  Real a(1L, work);
  Real b = sqrt(Real(1L, work) / 2L);
  Real t = Real(1L, work) / 4L;
  Real p(1L, work);
  Real tol = pow10(-(d.value + 5), work);
  for (int it = 0; it < 64; ++it) {
    Real next_a = (a + b) / 2L;
    b = sqrt(a * b);
    Real diff = a - next_a;
    t -= p * square(diff);
    p *= 2L;
    a = std::move(next_a);
    if (abs(a - b) < tol) break;
  }
  return square(a + b) / (4L * t);
}

inline ConstantCache& pi_cache() {
  static ConstantCache cache;
  return cache;
}

inline ConstantCache& gamma_quarter_cache() {
  static ConstantCache cache;
  return cache;
}

}  // namespace detail

/// pi to `d` digits.
inline Real pi(Digits d) {
  if (d.value < 1) throw std::invalid_argument("pi requires at least one digit");
  return detail::pi_cache().get(d, detail::compute_pi);
}

/// Gamma(1/4) from Gamma(1/4)^2 = 2 sqrt(2 pi) pi / agm(1, sqrt 2).
inline Real gamma_quarter(Digits d) {
  return detail::gamma_quarter_cache().get(d, [](Digits dd) {
    Digits work = dd + 15;
    Real p = pi(work);
    Real m = agm(Real(1L, work), sqrt(Real(2L, work)));
    return sqrt(2L * sqrt(2L * p) * p / m);
  });
}

inline Real ln10(Digits d) { return log(Real(10L, d)); }

// ---------------------------------------------------------------------------
// Bernoulli coefficients B_{2k}/(2k)!.

/// Exact rational in lowest terms with a positive denominator.
struct RationalCoeff {
  mpz_class numerator;
  mpz_class denominator;

  explicit RationalCoeff(mpq_class q) {
    q.canonicalize();
    numerator = q.get_num();
    denominator = q.get_den();
  }
  mpq_class value() const { return mpq_class(numerator, denominator); }
  Real to_real(Digits d) const { return Real(value(), d); }
  int sign() const { return sgn(numerator); }
  std::string to_string() const { return numerator.get_str() + "/" + denominator.get_str(); }
};

inline constexpr int kMaxBernoulliIndex = 32;

namespace detail {

// Akiyama-Tanigawa, exact. Returns B_0..B_n with B_1 = +1/2.
inline std::vector<mpq_class> bernoulli_numbers(int n) {
  std::vector<mpq_class> a(static_cast<std::size_t>(n) + 1), out(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    a[static_cast<std::size_t>(m)] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      auto ju = static_cast<std::size_t>(j);
      a[ju - 1] = j * (a[ju - 1] - a[ju]);
      a[ju - 1].canonicalize();
    }
    out[static_cast<std::size_t>(m)] = a[0];
  }
  return out;
}

}  // namespace detail

/// B_{2k}/(2k)! for 1 <= k <= 32.
inline RationalCoeff bernoulli_ratio(int k) {
  if (k < 1 || k > kMaxBernoulliIndex)
    throw std::out_of_range("bernoulli_ratio: k must lie in [1, " + std::to_string(kMaxBernoulliIndex) + "]");
  static const std::vector<mpq_class> table = [] {
    auto b = detail::bernoulli_numbers(2 * kMaxBernoulliIndex);
    std::vector<mpq_class> ratios(kMaxBernoulliIndex + 1);
    mpz_class fact = 1;
    for (int j = 1; j <= 2 * kMaxBernoulliIndex; ++j) {
      fact *= j;
      if (j % 2 == 0) {
        mpq_class r = b[static_cast<std::size_t>(j)] / mpq_class(fact);
        r.canonicalize();
        ratios[static_cast<std::size_t>(j / 2)] = r;
      }
    }
    return ratios;
  }();
  return RationalCoeff(table[static_cast<std::size_t>(k)]);
}

/// Guard digits for a sum of M+1 terms: 20 + ceil(log10(M+1)).
inline long guard_digits(long M) {
  return 20 + static_cast<long>(std::ceil(std::log10(static_cast<double>(std::max<long>(M, 0) + 1))));
}

/// Fixed precision used by the step-size and window planners.
inline constexpr Digits kPlannerDigits{40};

}  // namespace trapnorm

#endif  // TRAPNORM_BIGREAL_HPP
