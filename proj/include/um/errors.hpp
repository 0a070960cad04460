#pragma once

#include <stdexcept>
#include <string>

namespace um {

// Stepsize violates a scheme precondition (e.g. mu*s >= 1).
class StepsizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iteration or integration produced a non-finite state, or the
// divergence guard tripped. The partial trace survives in the caller.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// A diagnostic (energy, bound) was requested for an objective or flow
// that cannot provide it (missing minimizer, no catalog Lyapunov).
class UnsupportedDiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative estimate did not reach its target tolerance. Carries the
// best value obtained so far.
class ToleranceNotReachedError : public std::runtime_error {
 public:
  ToleranceNotReachedError(const std::string& what, double best, double tol)
      : std::runtime_error(what), best_(best), achieved_tol_(tol) {}
  double best_estimate() const { return best_; }
  double achieved_tolerance() const { return achieved_tol_; }

 private:
  double best_;
  double achieved_tol_;
};

// The tensor-update subproblem solver failed (bracketing or capability).
class SubsolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace um
