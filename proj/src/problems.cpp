#include "um/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "um/errors.hpp"
#include "um/rng.hpp"

namespace um {

double Objective::gap(const Eigen::VectorXd& x) const {
  if (!min_value)
    throw UnsupportedDiagnosticError("Objective::gap: min_value not available for " + id);
  return value(x) - *min_value;
}

Objective make_toy_quadratic(double mu) {
  if (mu < 0.0) throw std::invalid_argument("make_toy_quadratic: mu must be >= 0");
  Objective obj;
  obj.id = "toy(mu=" + std::to_string(mu) + ")";
  obj.n = 2;
  obj.mu = std::min(mu, 0.01);
  obj.L = std::max(mu, 0.01);
  obj.value = [mu](const Eigen::VectorXd& x) {
    return 0.5 * mu * x[0] * x[0] + 0.005 * x[1] * x[1];
  };
  obj.gradient = [mu](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g << mu * x[0], 0.01 * x[1];
    return g;
  };
  obj.hessian = [mu](const Eigen::VectorXd&) {
    Eigen::MatrixXd h(2, 2);
    h << mu, 0.0, 0.0, 0.01;
    return h;
  };
  obj.minimizer = Eigen::VectorXd::Zero(2);
  obj.min_value = 0.0;
  return obj;
}

LogisticDataset synth_logistic(int m, int n, double lambda, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("synth_logistic: m, n must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("synth_logistic: lambda must be positive");
  GaussianSampler gauss(seed);
  LogisticDataset ds;
  ds.lambda = lambda;
  ds.seed = seed;
  ds.features.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) ds.features(i, j) = gauss();
  Eigen::VectorXd truth(n);
  for (int j = 0; j < n; ++j) truth[j] = 0.1 * gauss();
  ds.labels.resize(m);
  for (int i = 0; i < m; ++i) {
    const double u = ds.features.row(i).dot(truth);
    const double p = 1.0 / (1.0 + std::exp(-u));
    ds.labels[i] = gauss.uniform01() <= p ? 1.0 : 0.0;
  }
  return ds;
}

namespace {

double softplus(double u) {
  // log(1 + e^u) without overflow for large |u|.
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// Minimal NAG-SC loop used only to pin down f* and x* for the logistic
// objective; keeps this module independent of the schemes module.
void solve_reference(Objective& obj) {
  const double s = 1.0 / obj.L;
  const double q = std::sqrt(obj.mu * s);
  const double tau = q / (1.0 + q);
  const double delta = std::sqrt(s / obj.mu);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(obj.n);
  Eigen::VectorXd z = x;
  double best_f = obj.value(x);
  Eigen::VectorXd best_x = x;
  constexpr long kMaxIter = 100000;
  constexpr double kGradTol = 1e-12;
  for (long k = 0; k < kMaxIter; ++k) {
    const Eigen::VectorXd y = x + tau * (z - x);
    const Eigen::VectorXd g = obj.gradient(y);
    if (g.norm() <= kGradTol) {
      const double fy = obj.value(y);
      obj.minimizer = y;
      obj.min_value = std::min(fy, best_f);
      return;
    }
    x = y - s * g;
    z += delta * (obj.mu * (y - z) - g);
    const double fx = obj.value(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  obj.warnings.push_back("reference solve did not reach |grad| <= 1e-12; min_value left unset");
}

}  // namespace

Objective make_logistic(const LogisticDataset& ds) {
  const int m = ds.m();
  const int n = ds.n();
  const double lambda = ds.lambda;
  const Eigen::MatrixXd A = ds.features;
  const Eigen::VectorXd y = ds.labels;

  Objective obj;
  obj.id = "logistic(m=" + std::to_string(m) + ",n=" + std::to_string(n) +
           ",lambda=" + std::to_string(lambda) + ",seed=" + std::to_string(ds.seed) + ")";
  obj.n = n;
  obj.mu = 2.0 * lambda / m;
  obj.L = (A.rowwise().squaredNorm().sum() / 4.0 + 2.0 * lambda) / m;

  obj.value = [A, y, lambda, m](const Eigen::VectorXd& x) {
    const Eigen::VectorXd u = A * x;
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += -y[i] * u[i] + softplus(u[i]);
    return (acc + lambda * x.squaredNorm()) / m;
  };
  obj.gradient = [A, y, lambda, m](const Eigen::VectorXd& x) {
    const Eigen::VectorXd u = A * x;
    Eigen::VectorXd sig(u.size());
    for (int i = 0; i < u.size(); ++i) sig[i] = 1.0 / (1.0 + std::exp(-u[i]));
    return Eigen::VectorXd((A.transpose() * (sig - y) + 2.0 * lambda * x) / m);
  };
  obj.hessian = [A, lambda, m, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd u = A * x;
    Eigen::VectorXd w(u.size());
    for (int i = 0; i < u.size(); ++i) {
      const double sig = 1.0 / (1.0 + std::exp(-u[i]));
      w[i] = sig * (1.0 - sig);
    }
    Eigen::MatrixXd h = A.transpose() * w.asDiagonal() * A;
    h += 2.0 * lambda * Eigen::MatrixXd::Identity(n, n);
    return Eigen::MatrixXd(h / m);
  };

  solve_reference(obj);
  return obj;
}

void LogisticDataset::save(const std::string& csv_path) const {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("LogisticDataset::save: cannot open " + csv_path);
  out << "row,label";
  for (int j = 0; j < n(); ++j) out << ",a_" << (j + 1);
  out << "\n";
  out.precision(17);
  for (int i = 0; i < m(); ++i) {
    out << i << "," << static_cast<int>(labels[i]);
    for (int j = 0; j < n(); ++j) out << "," << features(i, j);
    out << "\n";
  }
  nlohmann::json side{{"m", m()}, {"n", n()}, {"lambda", lambda}, {"seed", seed}};
  std::ofstream meta(csv_path + ".json");
  meta << side.dump(2) << "\n";
}

LogisticDataset LogisticDataset::load(const std::string& csv_path) {
  std::ifstream meta(csv_path + ".json");
  if (!meta) throw std::runtime_error("LogisticDataset::load: missing sidecar for " + csv_path);
  nlohmann::json side;
  meta >> side;
  LogisticDataset ds;
  ds.lambda = side.at("lambda").get<double>();
  ds.seed = side.at("seed").get<std::uint64_t>();
  const int m = side.at("m").get<int>();
  const int n = side.at("n").get<int>();
  ds.features.resize(m, n);
  ds.labels.resize(m);

  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("LogisticDataset::load: cannot open " + csv_path);
  std::string line;
  std::getline(in, line);  // header
  for (int i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("LogisticDataset::load: truncated file " + csv_path);
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // row index
    std::getline(ss, cell, ',');
    ds.labels[i] = std::stod(cell);
    for (int j = 0; j < n; ++j) {
      std::getline(ss, cell, ',');
      ds.features(i, j) = std::stod(cell);
    }
  }
  return ds;
}

double grad_check(const Objective& obj, const Eigen::VectorXd& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grad_check: step must be positive");
  const Eigen::VectorXd g = obj.gradient(x);
  const double scale = std::max(1.0, g.lpNorm<Eigen::Infinity>());
  double worst = 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(obj.n);
  for (int i = 0; i < obj.n; ++i) {
    e[i] = step;
    const double fd = (obj.value(x + e) - obj.value(x - e)) / (2.0 * step);
    worst = std::max(worst, std::fabs(fd - g[i]) / scale);
    e[i] = 0.0;
  }
  return worst;
}

double hess_check(const Objective& obj, const Eigen::VectorXd& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("hess_check: step must be positive");
  if (!obj.has_hessian())
    throw UnsupportedDiagnosticError("hess_check: objective has no Hessian: " + obj.id);
  const Eigen::MatrixXd h = obj.hessian(x);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  double worst = 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(obj.n);
  for (int i = 0; i < obj.n; ++i) {
    e[i] = step;
    const Eigen::VectorXd col = (obj.gradient(x + e) - obj.gradient(x - e)) / (2.0 * step);
    worst = std::max(worst, (col - h.col(i)).lpNorm<Eigen::Infinity>() / scale);
    e[i] = 0.0;
  }
  return worst;
}

}  // namespace um
