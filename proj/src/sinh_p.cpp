#include "um/sinh_p.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "um/errors.hpp"

namespace um {

HigherHyperbolicTable::HigherHyperbolicTable(int p, double grid_step)
    : p_(p), h_(grid_step) {
  if (p < 2) throw std::invalid_argument("HigherHyperbolicTable: order p must be >= 2");
  if (!(grid_step > 0.0)) throw std::invalid_argument("HigherHyperbolicTable: grid_step must be positive");
  nodes_.push_back(0.0);
}

double HigherHyperbolicTable::cosh_of_sinh(double s) const {
  // (1 + s^p)^{1/p}; for s > 1 factor out s to avoid overflow of s^p.
  if (s <= 1.0) return std::pow(1.0 + std::pow(s, p_), 1.0 / p_);
  return s * std::pow(1.0 + std::pow(s, -p_), 1.0 / p_);
}

void HigherHyperbolicTable::extend(double t) {
  while (t_max() < t) {
    double s = nodes_.back();
    const double k1 = cosh_of_sinh(s);
    const double k2 = cosh_of_sinh(s + 0.5 * h_ * k1);
    const double k3 = cosh_of_sinh(s + 0.5 * h_ * k2);
    const double k4 = cosh_of_sinh(s + h_ * k3);
    s += h_ / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    if (!std::isfinite(s))
      throw std::overflow_error("HigherHyperbolicTable: sinh_p overflow during extension");
    nodes_.push_back(s);
  }
}

std::pair<double, double> HigherHyperbolicTable::eval(double t) const {
  if (t < 0.0) throw std::domain_error("HigherHyperbolicTable: t must be >= 0");
  if (t > t_max()) throw std::domain_error("HigherHyperbolicTable: t beyond table range");
  const double pos = t / h_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= nodes_.size() - 1) {
    const double s = nodes_.back();
    return {s, cosh_of_sinh(s)};
  }
  // Cubic Hermite on [t_i, t_{i+1}] with exact node derivatives.
  const double u = pos - static_cast<double>(i);
  const double s0 = nodes_[i], s1 = nodes_[i + 1];
  const double d0 = cosh_of_sinh(s0), d1 = cosh_of_sinh(s1);
  const double u2 = u * u, u3 = u2 * u;
  const double s = (2 * u3 - 3 * u2 + 1) * s0 + (u3 - 2 * u2 + u) * h_ * d0 +
                   (-2 * u3 + 3 * u2) * s1 + (u3 - u2) * h_ * d1;
  return {s, cosh_of_sinh(s)};
}

std::pair<double, double> HigherHyperbolicTable::eval_extending(double t) {
  if (t > t_max()) extend(t);
  return eval(t);
}

HigherVariants HigherHyperbolicTable::variants(double t) {
  if (t < 0.0) throw std::domain_error("variants: t must be >= 0");
  HigherVariants v{};
  if (t == 0.0) {
    v.tanh_p = 0.0;
    v.coth_p = std::numeric_limits<double>::infinity();
    v.sinhc_p = v.tanhc_p = v.cothc_p = v.cschc_p = 1.0;
    return v;
  }
  const auto [s, c] = eval_extending(t);
  v.tanh_p = s / c;
  v.coth_p = c / s;
  v.sinhc_p = s / t;
  v.tanhc_p = s / (t * c);
  v.cothc_p = t * c / s;
  v.cschc_p = t / s;
  return v;
}

double HigherHyperbolicTable::cp_ratio(double t) {
  const auto [s, c] = eval_extending(t);
  (void)c;
  return s * std::exp(-t);
}

CpEstimate HigherHyperbolicTable::estimate_Cp(double horizon) {
  constexpr double kPlateauTol = 1e-6;
  double best = cp_ratio(1.0);
  for (double t = 1.0; t + 2.0 <= horizon; t += 1.0) {
    const double r0 = cp_ratio(t);
    const double r1 = cp_ratio(t + 1.0);
    const double r2 = cp_ratio(t + 2.0);
    best = r2;  // the ratio increases monotonically toward C_p
    const double gap = std::max(std::fabs(r1 - r0), std::fabs(r2 - r1));
    if (gap <= kPlateauTol) return {r2, gap, t + 2.0};
  }
  throw ToleranceNotReachedError("estimate_Cp: no plateau before horizon", best, kPlateauTol);
}

}  // namespace um
