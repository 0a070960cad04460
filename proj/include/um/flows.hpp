#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>

#include "um/problems.hpp"
#include "um/sinh_p.hpp"
#include "um/tensor.hpp"
#include "um/trace.hpp"

namespace um {

enum class FlowId {
  NagCSys,
  NagScSys,
  UnifiedNagSys,
  UnifiedLagrangian,
  TensorFlow,
  OriginalNagFlow,
  NagG,
};

std::string flow_name(FlowId id);

// A first-order flow in one of two shapes:
//
//  XZ shape (position / momentum-variable pair, possibly through a
//  mirror map):   dX = tau(t) (Z - X)
//                 dW = c1(t) (grad_h(X) - W) - c2(t) grad f(X),
//  with W = grad_h(Z) (identity map for the Euclidean flows).
//
//  XV shape (damped second-order form): dX = V, dV = -damping(t) V - grad f(X).
//
// Flows whose tau blows up at t = 0 are started at eps = 10 dt from the
// local series expansion (see integrate_flow).
struct FlowSpec {
  FlowId id = FlowId::NagCSys;
  double mu = 0.0;
  int p = 2;           // tensor flow order (mirror map order)
  double C = 0.25;     // tensor flow constant
  double gamma0 = 0.0; // original-NAG flow
  double T = 0.0;      // NAG-G horizon

  bool xv_shape = false;
  bool singular_start = false;
  double tau0 = 2.0;      // t->0 limit of t * tau(t), for the series start
  double series_q = 2.0;  // leading power of Z(t) - x0 near t = 0

  std::function<double(double)> tau, c1, c2;   // XZ shape coefficients
  std::function<double(double)> damping;       // XV shape
  std::function<double(double)> c2_int;        // int_0^eps c2, for the series start
  std::function<double(double)> beta_exp;      // e^{beta(t)} for Lagrangian energies

  MirrorMap mirror{2};
  std::shared_ptr<HigherHyperbolicTable> sinhp;  // p > 2 tensor flows

  static FlowSpec nag_c();
  static FlowSpec nag_sc(double mu);
  static FlowSpec unified_nag(double mu);
  static FlowSpec tensor_flow(int p, double C, double mu);
  static FlowSpec original_nag_flow(double mu, double gamma0);
  // Unified Bregman Lagrangian flow (Euclidean h) for explicit
  // exp(alpha), exp(beta), beta_dot entries with regular start.
  static FlowSpec lagrangian(double mu, std::function<double(double)> alpha_exp,
                             std::function<double(double)> beta_exp,
                             std::function<double(double)> beta_dot);
  // Catalog entry matching the original-NAG flow (gamma0 > mu):
  // alpha = 0, beta = t - log(gamma0 - mu).
  static FlowSpec lagrangian_from_original(double mu, double gamma0);
  static FlowSpec nag_g(double mu, double T);
};

// Fixed-step classical RK4 integration of a flow. Singular-start flows
// begin at eps = 10 dt with
//   W(eps) = grad_h(x0) - c2_int(eps) grad f(x0)
//   X(eps) = x0 + tau0/(series_q + tau0) (grad_h_star(W(eps)) - x0),
// which reduces to X(eps) = x0 - (C_f/2) grad f(x0) eps^{p_f} in the
// Euclidean case. Nodes carry derivative samples for dense output.
// Throws DivergenceError if the state leaves the finite range.
Trajectory integrate_flow(const FlowSpec& spec, const Objective& obj, const Eigen::VectorXd& x0,
                          double horizon, double dt);

// Catalog Lyapunov energy at a node; UnsupportedDiagnosticError when the
// flow has no catalog energy (original-NAG flow) or the objective lacks
// a minimizer.
double energy_continuous(const FlowSpec& spec, const TrajNode& node, const Objective& obj);

// Catalog convergence-guarantee right-hand side at a node.
double bound_continuous(const FlowSpec& spec, const TrajNode& node, const Eigen::VectorXd& x0,
                        const Objective& obj);

struct NagGResult {
  Trajectory trajectory;     // on [0, T - 10 dt]
  Eigen::VectorXd x_T;       // extrapolated endpoint
  double grad_norm_sq_T = 0; // |grad f(X(T))|^2
};

// Integrate the gradient-norm-minimizing flow to T - 10 dt and
// extrapolate X(T) through dX(T) = 0, ddX(T) = grad f(X(T)) / 2 (one
// fixed-point pass).
NagGResult integrate_nag_g(const Objective& obj, const Eigen::VectorXd& x0, double mu, double T,
                           double dt);

// Posterior energy of the NAG-G flow at a node, given the endpoint.
double energy_nag_g(const TrajNode& node, const Eigen::VectorXd& x_T, double mu, double T,
                    const Objective& obj);

// Right-hand side of the endpoint gradient-norm guarantee:
//   8/T^2 cschc^2(sqrt(mu) T/2) (f(x0) - f* + mu/2 |x0 - X(T)|^2).
double nag_g_bound(const Eigen::VectorXd& x0, const Eigen::VectorXd& x_T, double mu, double T,
                   const Objective& obj);

// Time reparametrization T: flow2-time -> flow1-time with the dilated
// flow attached.
struct TimeDilation {
  FlowSpec flow1, flow2;
  std::function<double(double)> map;  // T(t)
  static TimeDilation identity(const FlowSpec& spec);
  // Unified NAG system vs the accelerated tensor flow: T = beta1^{-1} o beta2.
  static TimeDilation unified_to_tensor(double mu, int p, double C);
  // T(t) = c t applied to a Lagrangian entry: alpha2 = alpha1(ct) + log c,
  // beta2 = beta1(ct).
  static TimeDilation linear_speedup(double mu, double c,
                                     std::function<double(double)> alpha_exp,
                                     std::function<double(double)> beta_exp,
                                     std::function<double(double)> beta_dot);
};

// Integrate both flows and return max_t |X2(t) - X1(T(t))|_inf over the
// flow-2 nodes in [t_lo, t_hi].
double verify_time_dilation(const TimeDilation& dil, const Objective& obj,
                            const Eigen::VectorXd& x0, double t_lo, double t_hi, double dt);

// Max norm of the one-line second-order ODE residual over interior
// nodes (central differences; singular buffers excluded).
double ode_residual(const FlowSpec& spec, const Trajectory& traj, const Objective& obj);

}  // namespace um
