#pragma once

#include <stdexcept>
#include <string>

namespace ed {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its mathematical domain (e.g. nu <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked in a state that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A populated solution matches none of the admissible sign patterns.
/// Signals a solver failure: genuine solutions always classify.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

/// The boundary-condition denominator of the linear solve is numerically
/// singular. Never reached for valid parameters; guarded defensively.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A cumulative quadrature produced a non-finite value.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A direct linear solve failed (singular or ill-posed system).
class LinearSolveError : public Error {
 public:
  using Error::Error;
};

/// Two grid-sampled quantities that must share a grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// A recursion step was asked for before its lower-order inputs exist.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration failed to reach the requested residual, even with
/// damping and parameter continuation. Carries the best residual achieved
/// and how far the continuation got.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, double best_residual,
                      double reached_delta_j, int iterations)
      : Error(message),
        best_residual_(best_residual),
        reached_delta_j_(reached_delta_j),
        iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  double reached_delta_j() const noexcept { return reached_delta_j_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  double reached_delta_j_;
  int iterations_;
};

}  // namespace ed
