#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace um {

// A smooth objective bundle: value, gradient, optional Hessian, plus the
// smoothness/strong-convexity metadata the schemes and flows consume.
// Immutable after construction; all evaluations are pure.
struct Objective {
  std::string id;
  int n = 0;
  double L = 0.0;   // smoothness constant
  double mu = 0.0;  // strong-convexity parameter (>= 0)

  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;  // may be empty

  std::optional<Eigen::VectorXd> minimizer;
  std::optional<double> min_value;
  std::vector<std::string> warnings;

  bool has_hessian() const { return static_cast<bool>(hessian); }

  // f(x) - f*; requires min_value.
  double gap(const Eigen::VectorXd& x) const;
};

// f(x, y) = (mu/2) x^2 + 0.005 y^2 on R^2, minimized at the origin.
// Strong-convexity parameter min{mu, 0.01}, smoothness max{mu, 0.01}.
Objective make_toy_quadratic(double mu);

struct LogisticDataset {
  Eigen::MatrixXd features;  // m x n
  Eigen::VectorXd labels;    // entries in {0, 1}
  double lambda = 0.0;
  std::uint64_t seed = 0;

  int m() const { return static_cast<int>(features.rows()); }
  int n() const { return static_cast<int>(features.cols()); }

  // CSV with header row,label,a_1..a_n plus a JSON sidecar {m,n,lambda,seed}.
  void save(const std::string& csv_path) const;
  static LogisticDataset load(const std::string& csv_path);
};

// Feature entries ~ N(0,1); ground-truth weights ~ N(0, 1/100); labels are
// Bernoulli draws from the logistic model. Deterministic in the seed.
LogisticDataset synth_logistic(int m, int n, double lambda, std::uint64_t seed);

// l2-regularized logistic regression objective
//   f(x) = (1/m) ( sum_i [-y_i a_i'x + log(1 + e^{a_i'x})] + lambda |x|^2 )
// with analytic gradient and Hessian, L = (1/m)(sum |a_i|^2/4 + 2 lambda),
// mu = 2 lambda / m. The minimizer and min_value are produced by an
// internal NAG-SC run with s = 1/L, stopped at |grad| <= 1e-12 (at most
// 1e5 iterations); on failure min_value stays absent and a warning is
// recorded.
Objective make_logistic(const LogisticDataset& ds);

// Central-difference derivative checks; return the maximum relative error
// (normalized by max(1, |exact|_inf)). step must be positive.
double grad_check(const Objective& obj, const Eigen::VectorXd& x, double step);
double hess_check(const Objective& obj, const Eigen::VectorXd& x, double step);

}  // namespace um
