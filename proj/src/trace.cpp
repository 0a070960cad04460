#include "um/trace.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace um {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_meta(const std::map<std::string, std::string>& meta, const std::string& path) {
  nlohmann::json j(meta);
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

double RunTrace::gap(std::size_t i) const {
  return f_star ? rows[i].f_raw - *f_star : kNaN;
}

void RunTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("RunTrace::write_csv: cannot open " + path);
  out << "k,t_k,f_gap,grad_norm,energy,bound";
  if (tensor_columns) out << ",A_k,M_residual";
  out << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TraceRow& r = rows[i];
    out << r.k << "," << r.t << "," << gap(i) << "," << r.grad_norm << "," << r.energy << ","
        << r.bound;
    if (tensor_columns) out << "," << r.A_k << "," << r.M_residual;
    out << "\n";
  }
  write_meta(meta, path + ".json");
}

double Trajectory::gap(std::size_t i) const {
  return f_star ? nodes[i].f_raw - *f_star : kNaN;
}

Eigen::VectorXd Trajectory::interp_x(double t) const {
  if (nodes.empty()) throw std::runtime_error("Trajectory::interp_x: empty trajectory");
  if (t <= nodes.front().t) return nodes.front().x;
  if (t >= nodes.back().t) return nodes.back().x;
  // Uniform spacing except possibly nowhere; a binary search keeps this
  // robust to the series-start offset.
  std::size_t lo = 0, hi = nodes.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (nodes[mid].t <= t ? lo : hi) = mid;
  }
  const TrajNode& a = nodes[lo];
  const TrajNode& b = nodes[hi];
  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * a.x + (u3 - 2 * u2 + u) * h * a.dx +
         (-2 * u3 + 3 * u2) * b.x + (u3 - u2) * h * b.dx;
}

void Trajectory::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("Trajectory::write_csv: cannot open " + path);
  const int n = nodes.empty() ? 0 : static_cast<int>(nodes.front().x.size());
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",x_" << j;
  for (int j = 1; j <= n; ++j) out << ",z_" << j;
  out << ",f_gap,energy,bound\n";
  out.precision(17);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TrajNode& nd = nodes[i];
    out << nd.t;
    for (int j = 0; j < n; ++j) out << "," << nd.x[j];
    for (int j = 0; j < n; ++j) out << "," << nd.z[j];
    out << "," << gap(i) << "," << nd.energy << "," << nd.bound << "\n";
  }
  write_meta(meta, path + ".json");
}

}  // namespace um
