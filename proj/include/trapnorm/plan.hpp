#ifndef TRAPNORM_PLAN_HPP
#define TRAPNORM_PLAN_HPP

#include <trapnorm/bigreal.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace trapnorm {

/// Step size and summation window chosen ahead of time for a target of
/// `target_digits` decimal digits. Samples sit at x_min + m h for m = 0..M.
struct QuadPlan {
  Real h{kPlannerDigits};
  Real x_min{kPlannerDigits};
  Real x_max{kPlannerDigits};
  long M = 0;
  long target_digits = 0;
  long guard = 0;
  double est_error_log10 = 0.0;
  /// Extra decimal budget absorbed by a large wavefunction amplitude
  /// (2 log10 C for excited states, zero otherwise).
  double shift_digits = 0.0;

  long evaluations() const { return M + 1; }
  double predicted_digits() const { return -est_error_log10; }

  std::string describe() const {
    std::ostringstream os;
    os << "h=" << h.to_string(Digits(12)) << " x_min=" << x_min.to_string(Digits(12))
       << " x_max=" << x_max.to_string(Digits(12)) << " M=" << M << " P=" << target_digits << " g=" << guard
       << " est_log10_err=" << est_error_log10;
    if (shift_digits != 0.0) os << " amplitude_shift_digits=" << shift_digits;
    return os.str();
  }
};

/// Throws std::invalid_argument unless the plan can drive a trapezoid sum.
inline void validate_plan(const QuadPlan& plan) {
  if (!(plan.h > 0L)) throw std::invalid_argument("malformed plan: step h must be positive");
  if (plan.x_min < 0L) throw std::invalid_argument("malformed plan: x_min must be non-negative");
  if (plan.x_max < plan.x_min) throw std::invalid_argument("malformed plan: x_max < x_min");
  if (plan.M < 0) throw std::invalid_argument("malformed plan: negative M");
}

}  // namespace trapnorm

#endif  // TRAPNORM_PLAN_HPP
