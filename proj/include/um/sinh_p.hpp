#pragma once

#include <utility>
#include <vector>

namespace um {

struct CpEstimate {
  double value;         // plateau estimate of C_p
  double achieved_tol;  // largest gap between the accepted successive estimates
  double t_reached;     // abscissa at which the plateau was accepted
};

// Bundle of the order-p hyperbolic ratio functions at one argument.
struct HigherVariants {
  double tanh_p;
  double coth_p;   // +inf at t = 0 (true pole)
  double sinhc_p;  // 1 at t = 0
  double tanhc_p;  // 1 at t = 0
  double cothc_p;  // 1 at t = 0
  double cschc_p;  // 1 at t = 0
};

// Tabulated solution of the defining initial value problem
//
//   sinh_p'(t) = cosh_p(t) = (1 + sinh_p(t)^p)^{1/p},   sinh_p(0) = 0,
//
// integrated with the classical fourth-order Runge-Kutta method on a
// fixed grid and queried through cubic-Hermite dense output (the node
// derivatives are exactly cosh_p of the node values, so no extra
// derivative bookkeeping is needed). For p = 2 this reproduces the
// classical sinh/cosh pair.
//
// eval() is pure and safe to share across threads; extend() mutates the
// table and must be synchronized externally or called up-front.
class HigherHyperbolicTable {
 public:
  // p >= 2 required, grid_step > 0. Throws std::invalid_argument otherwise.
  explicit HigherHyperbolicTable(int p, double grid_step = 1e-4);

  int order() const { return p_; }
  double grid_step() const { return h_; }
  double t_max() const { return h_ * static_cast<double>(nodes_.size() - 1); }

  // Integrate the table forward so that t_max() >= t.
  void extend(double t);

  // (sinh_p(t), cosh_p(t)) at t >= 0; t must be within the current table.
  // Throws std::domain_error for t < 0 or t beyond t_max().
  std::pair<double, double> eval(double t) const;

  // Like eval() but extends the table on demand (not thread-safe).
  std::pair<double, double> eval_extending(double t);

  // Ratio functions of Section-2.3 type at t >= 0 (extends on demand).
  HigherVariants variants(double t);

  // Plateau estimate of the constant C_p with sinh_p(t) ~ C_p e^t.
  // Accepts when the estimates at t, t+1, t+2 agree pairwise to 1e-6;
  // throws ToleranceNotReachedError (carrying the best estimate) if the
  // plateau is not reached before `horizon`.
  CpEstimate estimate_Cp(double horizon = 60.0);

  // sinh_p(t) e^{-t}, the quantity whose limit is C_p.
  double cp_ratio(double t);

  // (1 + s^p)^{1/p} evaluated in overflow-safe form.
  double cosh_of_sinh(double s) const;

 private:
  int p_;
  double h_;
  std::vector<double> nodes_;  // nodes_[i] = sinh_p(i * h_)
};

}  // namespace um
