#ifndef TRAPNORM_TESTS_ORACLES_HPP
#define TRAPNORM_TESTS_ORACLES_HPP

// Standard-precision oracles that share no code with the library.

#include <cmath>
#include <functional>

namespace oracle {

using Potential = std::function<long double(long double x, long double E)>;

/// psi(xf) for psi'' = q(x, E) psi by classical RK4 with `steps` steps from 0.
inline long double rk4_psi(const Potential& q, long double E, bool even, long double xf, int steps) {
  long double y = even ? 1.0L : 0.0L, dy = even ? 0.0L : 1.0L;
  const long double h = xf / steps;
  for (int i = 0; i < steps; ++i) {
    long double x = h * i;
    long double k1y = dy, k1d = q(x, E) * y;
    long double k2y = dy + h / 2 * k1d, k2d = q(x + h / 2, E) * (y + h / 2 * k1y);
    long double k3y = dy + h / 2 * k2d, k3d = q(x + h / 2, E) * (y + h / 2 * k2y);
    long double k4y = dy + h * k3d, k4d = q(x + h, E) * (y + h * k3y);
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  return y;
}

/// Eigenvalue bracketed by [lo, hi] from the sign change of psi(xf).
inline long double shoot(const Potential& q, long double lo, long double hi, bool even, long double xf, int steps) {
  long double s_lo = std::copysign(1.0L, rk4_psi(q, lo, even, xf, steps));
  for (int i = 0; i < 200; ++i) {
    long double mid = (lo + hi) / 2;
    long double s = std::copysign(1.0L, rk4_psi(q, mid, even, xf, steps));
    if (s == s_lo) lo = mid;
    else hi = mid;
    if (hi - lo <= 4 * std::numeric_limits<long double>::epsilon() * hi) break;
  }
  return (lo + hi) / 2;
}

/// Richardson-extrapolated shooting (RK4 error ~ step^4).
inline long double shoot_extrapolated(const Potential& q, long double lo, long double hi, bool even, long double xf,
                                      int steps) {
  long double coarse = shoot(q, lo, hi, even, xf, steps);
  long double fine = shoot(q, lo, hi, even, xf, 2 * steps);
  return (16 * fine - coarse) / 15;
}

/// int e^{-(x^2 - a^2)^2} dx = a e^{-a^4/2} [K_{1/4}(a^4/2)/sqrt 2 + pi I_{1/4}(a^4/2)].
inline double double_hump_bessel(double a) {
  double z = 0.5 * std::pow(a, 4);
  return a * std::exp(-z) * (std::cyl_bessel_k(0.25, z) / std::sqrt(2.0) + M_PI * std::cyl_bessel_i(0.25, z));
}

/// Composite Simpson in long double on [lo, hi].
inline long double simpson(const std::function<long double(long double)>& f, long double lo, long double hi, int n) {
  if (n % 2) ++n;
  long double h = (hi - lo) / n, acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4 : 2) * f(lo + h * i);
  return acc * h / 3;
}

}  // namespace oracle

#endif  // TRAPNORM_TESTS_ORACLES_HPP
