#ifndef TRAPNORM_ERRORS_HPP
#define TRAPNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trapnorm {

/// A planner could not produce a usable step or window.
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p = 2 pi / h does not clear the classically allowed band: h too coarse for this E.
class StepTooCoarse : public PlanError {
 public:
  using PlanError::PlanError;
};

/// Requested abscissa lies inside the classically allowed region.
class BelowTurningPoint : public PlanError {
 public:
  using PlanError::PlanError;
};

/// Closed-form WKB prefactor is singular (harmonic case n = 1).
class SingularPrefactor : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigenvalue bracketing, convergence, or overflow failure.
class EigenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plan exceeds the configured evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trapnorm

#endif  // TRAPNORM_ERRORS_HPP
