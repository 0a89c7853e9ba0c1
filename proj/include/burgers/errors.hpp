#pragma once

#include <stdexcept>
#include <string>

namespace burgers {

/// A caller violated an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain where a quantity is defined (zero field in a
/// ratio, singular barrier, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures raised while integrating in time.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Newton iteration did not converge even after step subdivision.
class StepFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// NaN/Inf appeared in the discrete solution.
class NumericBlowup : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A tridiagonal system had a vanishing pivot.
class SingularSystem : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A solution expected to stay positive became non-positive on the nodes.
class PositivityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace burgers
