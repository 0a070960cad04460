#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace um {

// One record per iteration of a discrete scheme. f_raw is the raw
// objective value; the gap column of the CSV is derived from f_star at
// write time. energy/bound are NaN when the objective lacks a minimizer
// or the scheme has no catalog Lyapunov function. A_k and M_residual are
// populated only by the tensor method.
struct TraceRow {
  long k = 0;
  double t = 0.0;
  double f_raw = 0.0;
  double grad_norm = 0.0;
  double energy = 0.0;
  double bound = 0.0;
  double A_k = 0.0;
  double M_residual = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::map<std::string, std::string> meta;
  std::optional<double> f_star;
  bool tensor_columns = false;

  double gap(std::size_t i) const;

  // Columns k,t_k,f_gap,grad_norm,energy,bound (+A_k,M_residual for the
  // tensor method), plus a JSON metadata sidecar at <path>.json.
  void write_csv(const std::string& path) const;
};

// One node of an integrated flow, with derivative samples for dense
// (cubic-Hermite) interpolation between nodes.
struct TrajNode {
  double t = 0.0;
  Eigen::VectorXd x, z;
  Eigen::VectorXd dx, dz;
  double f_raw = 0.0;
  double energy = 0.0;
  double bound = 0.0;
};

struct Trajectory {
  std::vector<TrajNode> nodes;
  std::map<std::string, std::string> meta;
  std::optional<double> f_star;

  double gap(std::size_t i) const;

  // Cubic-Hermite interpolation of X at time t (t within node range).
  Eigen::VectorXd interp_x(double t) const;

  // Columns t,x_1..x_n,z_1..z_n,f_gap,energy,bound plus a JSON sidecar.
  void write_csv(const std::string& path) const;
};

}  // namespace um
