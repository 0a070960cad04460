#pragma once

#include <Eigen/Core>
#include <memory>

#include "um/problems.hpp"
#include "um/sinh_p.hpp"
#include "um/trace.hpp"

namespace um {

// p-th power mirror map h(x) = (1/p)|x|^p with its gradient, inverse
// gradient and Bregman divergence. p = 2 is the Euclidean case.
struct MirrorMap {
  int p = 2;

  double h(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_h(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_h_star(const Eigen::VectorXd& w) const;
  double bregman(const Eigen::VectorXd& y, const Eigen::VectorXd& x) const;
};

MirrorMap p_norm_mirror(int p);

// Tensor update operator G_{p,s,N}(y): minimizer of the (p-1)-st order
// Taylor model plus (N/(p s)) |x - y|^p.
//  p = 2 (N = 1): the gradient step y - s grad f(y).
//  p = 3: solves (H + (N r / s) I) d = -grad f(y) with r = |d| via
//         monotone bisection on r; requires the objective's Hessian.
Eigen::VectorXd tensor_update(const Objective& obj, const Eigen::VectorXd& y, int p, double s,
                              double N);

// Certificate residual of the tensor update inequality:
//   <grad f(x), y - x> - M s^{1/(p-1)} |grad f(x)|^{p/(p-1)}.
// Nonnegative means the (N, M) pair is certified at this step.
double check_M_ineq(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    int p, double s, double M);

// Default constants for the update operator. For p = 2 the classical
// pair (N, M) = (1, 1/2). For p = 3 with Hessian-Lipschitz constant
// 2/s, the model error bound gives M = (N-1)/(N+1)^{3/2}; the default
// N = 2 yields M = 1/(3 sqrt 3), verified at runtime via check_M_ineq.
double default_N(int p);
double default_M(int p, double N);

// A-sequence growth constant C = (1/p) (M/(p-1))^{p-1}.
double tensor_C(int p, double M);

// Largest A satisfying (A - A_k)^p = C p^p s A^{p-1} (1 + mu A_k),
// located by monotone bracketing + bisection to relative 1e-12. Strictly
// greater than A_k.
double next_Ak(double A_k, int p, double s, double mu, double C);

// A(t) = C t^p sinhc_p^p(C^{1/p} mu^{1/p} t) and its inverse; the table
// argument supplies sinh_p for p > 2 and may be null for p = 2.
double A_of_t(double t, int p, double C, double mu, HigherHyperbolicTable* table);
double t_of_A(double A, int p, double C, double mu, HigherHyperbolicTable* table);

// Timestep sequence reproducing the convex-case accelerated tensor
// method: t_k = s^{1/p} (k (k+1) ... (k+p-1))^{1/p}.
double wibisono_tk(long k, int p, double s);

struct TensorRunState {
  long k = 0;
  Eigen::VectorXd x, y, z;
  double A_k = 0.0;
  double t_k = 0.0;
  int p = 2;
  double s = 0.0;
  double mu = 0.0;
  double N = 1.0;
  double M = 0.5;
  double C = 0.25;
};

TensorRunState make_tensor_state(const Eigen::VectorXd& x0, int p, double s, double mu, double N,
                                 double M);

// One step of the unified accelerated tensor method family:
//   A_{k+1} from next_Ak, y from the convex combination, x from the
//   tensor update, z from the closed-form mirror solve
//   (1 + mu c) grad_h(z') = grad_h(z) + c (mu grad_h(x') - grad f(x'))
// with c = (A_{k+1} - A_k)/(1 + mu A_k). The second overload takes an
// externally chosen A_{k+1} (any sequence satisfying the A-condition).
TensorRunState step_unified_tensor(const TensorRunState& state, const Objective& obj,
                                   const MirrorMap& mirror);
TensorRunState step_unified_tensor(const TensorRunState& state, const Objective& obj,
                                   const MirrorMap& mirror, double A_next);

// E_k = (1 + mu A_k) D_h(x*, z_k) + A_k (f(x_k) - f*).
double energy_tensor(const TensorRunState& state, const Objective& obj, const MirrorMap& mirror);

// Full run; the trace carries the extra columns A_k and M_residual, the
// energy above and the bound E_0 / A_k.
RunTrace run_unified_tensor(const Objective& obj, const Eigen::VectorXd& x0, int p, double s,
                            double mu, long K, double N = -1.0, double M = -1.0);

}  // namespace um
