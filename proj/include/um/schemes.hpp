#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "um/problems.hpp"
#include "um/trace.hpp"

namespace um {

enum class SchemeId { NagC, NagSc, UnifiedConstant, UnifiedAdaptive, OriginalNag };

std::string scheme_name(SchemeId id);

// Coefficients for one step of the three-sequence scheme
//   y_k     = x_k + tau_k (z_k - x_k)
//   x_{k+1} = y_k - s grad f(y_k)
//   z_{k+1} = z_k + delta_k (mu y_k - mu z_k - grad f(y_k)).
struct StepCoeffs {
  double tau = 0.0;
  double delta = 0.0;
  double t_next = 0.0;  // t_{k+1} of the identification sequence
};

// |1 - mu delta - (1/s - mu) tau delta|, zero under the collinearity
// condition that makes x_k, x_{k+1}, z_{k+1} collinear.
double collinearity_residual(double tau, double delta, double mu, double s);

// Per-iteration coefficient generator. next() returns the coefficients
// for the upcoming step and advances the internal index/timestep state.
class SchemeCoefficients {
 public:
  static SchemeCoefficients nag_c(double s);
  static SchemeCoefficients nag_sc(double mu, double s);
  // Constant-timestep unified scheme; requires mu * s < 1. At mu = 0 the
  // generated coefficients are bit-identical to NAG-C's.
  static SchemeCoefficients unified_constant(double mu, double s);
  // Adaptive-timestep unified scheme started from t_0 > 0 (default sqrt(s)).
  static SchemeCoefficients unified_adaptive(double mu, double s, double t0);

  StepCoeffs next();
  double t() const { return t_; }  // t_k
  long k() const { return k_; }

  SchemeId id;
  double mu = 0.0;
  double s = 0.0;

 private:
  SchemeCoefficients() = default;
  long k_ = 0;
  double t_ = 0.0;
  double delta_const_ = 0.0;  // constant scheme: timestep
  double iota_ = 1.0;
  double alpha_ = 0.0;  // adaptive scheme: alpha_{k-1}
};

struct IterateState {
  long k = 0;
  double t = 0.0;
  Eigen::VectorXd x, y, z;
};

// One exact step of the three-sequence scheme; the only gradient
// evaluation is at y_k (its norm is reported through grad_norm_out when
// given). Throws DivergenceError on a non-finite gradient.
IterateState step_three_sequence(const IterateState& state, double tau, double delta, double mu,
                                 double s, const Objective& obj,
                                 double* grad_norm_out = nullptr);

// Discrete Lyapunov energy of the unified NAG family (Thm-4 form):
//   E_k = 1/2 cosh^2(sqrt(mu) t_k / 2) |z_k - x*|^2
//       + t_k^2/4 sinhc^2(sqrt(mu) t_k / 2) (f(x_k) - f*).
// Requires obj.minimizer and obj.min_value.
double energy_discrete_unified(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double t_k,
                               const Objective& obj, double mu);

// Right-hand side of the unified convergence guarantee at t_k given the
// run's start (x_0, t_0):
//   B_k = 4/t_k^2 cschc^2(sqrt(mu) t_k/2) *
//         ( 1/2 cosh^2(sqrt(mu) t_0/2) |x_0 - x*|^2
//           + t_0^2/4 sinhc^2(sqrt(mu) t_0/2) (f(x_0) - f*) ).
double bound_unified(double t_k, double t0, const Eigen::VectorXd& x0, const Objective& obj,
                     double mu);

struct RunOptions {
  bool record_diagnostics = true;  // energy/bound when the objective allows
  double divergence_factor = 1e12;
  bool grad_stop = false;  // optional early stop on |grad f(y_k)|
  double grad_tol = 0.0;
};

// Run a coefficient-generated scheme for K steps from x0 = z0.
RunTrace run_scheme(const Objective& obj, SchemeCoefficients coeffs, const Eigen::VectorXd& x0,
                    long K, const RunOptions& opts = {});

// Nesterov's constant step scheme I in its original four-line form, with
// alpha_k solved from alpha^2/s = (1-alpha) gamma_k + mu alpha each step.
// The trace's bound column carries prod_{i<=k-1}(1-alpha_i) * (f(x_0)-f*
// + gamma_0/2 |x_0-x*|^2); the energy column uses the t_k implied by
// gamma_k when gamma_0 > mu (NaN otherwise).
RunTrace run_original_nag(const Objective& obj, double s, double gamma0,
                          const Eigen::VectorXd& x0, long K, const RunOptions& opts = {});

// Next adaptive alpha: the unique root above sqrt(mu s) of
//   alpha^2 = (1 - alpha) alpha_prev^2 + mu s alpha.
double timestep_adaptive_next(double alpha_prev, double mu, double s);

// alpha(t) = (2 sqrt(s)/t) cothc(sqrt(mu) t / 2) and its inverse
// (monotone bisection to relative 1e-14).
double alpha_of_t(double t, double mu, double s);
double t_of_alpha(double alpha, double mu, double s);

// Two-sequence parameters (beta_k, gamma_k) of the same iteration,
//   beta_k  = (1 - tau_k) tau_{k+1} (1 - mu delta_k) / tau_k
//   gamma_k = tau_{k+1} ((1/s - mu) delta_k tau_k - 1 + mu delta_k) / tau_k;
// gamma_k vanishes exactly under the collinearity condition.
struct TwoSequence {
  std::vector<double> beta, gamma;
};
TwoSequence to_two_sequence(const std::vector<double>& tau, const std::vector<double>& delta,
                            double mu, double s);

// Per-index verification report of the timestep-sequence conditions used
// by the unified convergence theorem.
struct TkConditionReport {
  // cond2: (2 sqrt(s)/t_k) cothc(sqrt(mu) t_k/2) <= 1       (k >= 2)
  // cond1: (1 - 2 sqrt(s)/t_{k+1} cothc(...)) A(t_{k+1}) <= A(t_k),
  //        reported relative to max(1, A(t_k)),
  //        with A(t) = t^2/4 sinhc^2(sqrt(mu) t / 2)        (k >= 0)
  std::vector<double> residual2, residual1;  // <= 0 means satisfied
  std::vector<bool> ok2, ok1;
  bool all_ok(double tol = 0.0) const;
};
TkConditionReport check_tk_conditions(const std::vector<double>& t_seq, double mu, double s);

}  // namespace um
