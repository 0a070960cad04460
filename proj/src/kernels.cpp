#include "um/kernels.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "um/errors.hpp"
#include "um/hyperbolic.hpp"

namespace um {

void DifferenceMatrix::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("DifferenceMatrix::write_csv: cannot open " + path);
  out << "i,j,h_ij\n";
  out.precision(17);
  for (int i = 0; i < N(); ++i)
    for (int j = 0; j <= i; ++j) out << i << "," << j << "," << h(i, j) << "\n";
}

std::vector<double> theta_sequence(int N) {
  if (N < 1) throw std::invalid_argument("theta_sequence: N must be >= 1");
  std::vector<double> th(static_cast<std::size_t>(N) + 1);
  th[0] = 1.0;
  for (int k = 1; k <= N; ++k) {
    const double c = (k <= N - 1) ? 4.0 : 8.0;
    th[k] = 0.5 * (1.0 + std::sqrt(c * th[k - 1] * th[k - 1] + 1.0));
  }
  return th;
}

DifferenceMatrix build_HF(int N) {
  const auto th = theta_sequence(N);
  DifferenceMatrix m;
  m.origin = MatrixOrigin::Ogm;
  m.h = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    m.h(i, i) = 1.0 + (2.0 * th[i] - 1.0) / th[i + 1];
    if (i >= 1) {
      const double f = (th[i] - 1.0) / th[i + 1];
      m.h(i, i - 1) = f * (m.h(i - 1, i - 1) - 1.0);
      for (int j = 0; j <= i - 2; ++j) m.h(i, j) = f * m.h(i - 1, j);
    }
  }
  return m;
}

DifferenceMatrix build_HG(int N) {
  const auto th = theta_sequence(N);
  DifferenceMatrix m;
  m.origin = MatrixOrigin::OgmG;
  m.h = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    m.h(i, i) = 1.0 + (2.0 * th[N - i - 1] - 1.0) / th[N - i];
    if (i >= 1) {
      int j = i - 1;
      m.h(i, j) = (th[N - j - 1] - 1.0) / th[N - j] * (m.h(i, i) - 1.0);
      for (j = i - 2; j >= 0; --j)
        m.h(i, j) = (th[N - j - 1] - 1.0) / th[N - j] * m.h(i, j + 1);
    }
  }
  return m;
}

DifferenceMatrix matrix_from_two_sequence(const std::vector<double>& beta,
                                          const std::vector<double>& gamma, int N) {
  if (static_cast<int>(beta.size()) < N || static_cast<int>(gamma.size()) < N)
    throw std::invalid_argument("matrix_from_two_sequence: sequences shorter than N");
  DifferenceMatrix m;
  m.origin = MatrixOrigin::FromTwoSeq;
  m.h = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      double prod = beta[j] + gamma[j];
      for (int v = j + 1; v <= i; ++v) prod *= beta[v];
      m.h(i, j) = prod + (i == j ? 1.0 : 0.0);
    }
  }
  return m;
}

DifferentialKernel kernel_nag_c() {
  DifferentialKernel k;
  k.id = "nag_c";
  k.eval = [](double t, double tau) { return std::pow(tau / t, 3); };
  k.b = [](double t) { return 3.0 / t; };
  return k;
}

DifferentialKernel kernel_nag_sc(double mu) {
  DifferentialKernel k;
  k.id = "nag_sc";
  const double rmu = std::sqrt(mu);
  k.eval = [rmu](double t, double tau) { return std::exp(2.0 * rmu * (tau - t)); };
  k.b = [rmu](double) { return 2.0 * rmu; };
  return k;
}

DifferentialKernel kernel_ogm() {
  DifferentialKernel k;
  k.id = "ogm";
  k.eval = [](double t, double tau) { return 2.0 * std::pow(tau / t, 3); };
  k.b = [](double t) { return 3.0 / t; };
  return k;
}

DifferentialKernel kernel_ogm_g(double T) {
  DifferentialKernel k;
  k.id = "ogm_g";
  k.T = T;
  k.eval = [T](double t, double tau) { return 2.0 * std::pow((T - t) / (T - tau), 3); };
  k.b = [T](double t) { return 3.0 / (T - t); };
  return k;
}

namespace {

// tau^3 sinhc^3(r tau) cosh(r tau), the unified-kernel building block;
// exact tau^3 at mu = 0.
double unified_numerator(double v, double r) {
  const double sc = sinhc(r * v);
  return std::pow(v * sc, 3) * std::cosh(r * v);
}

}  // namespace

DifferentialKernel kernel_unified_nag(double mu) {
  DifferentialKernel k;
  k.id = "unified_nag";
  const double r = 0.5 * std::sqrt(mu);
  k.eval = [r](double t, double tau) { return unified_numerator(tau, r) / unified_numerator(t, r); };
  k.b = [r](double t) {
    return r * std::tanh(r * t) + 3.0 / t * cothc(r * t);
  };
  return k;
}

DifferentialKernel kernel_unified_nag_g(double mu, double T) {
  DifferentialKernel k;
  k.id = "unified_nag_g";
  k.T = T;
  const double r = 0.5 * std::sqrt(mu);
  k.eval = [r, T](double t, double tau) {
    return unified_numerator(T - t, r) / unified_numerator(T - tau, r);
  };
  k.b = [r, T](double t) {
    return r * std::tanh(r * (T - t)) + 3.0 / (T - t) * cothc(r * (T - t));
  };
  return k;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth,
                   long& budget) {
  if ((budget -= 2) <= 0)
    throw ToleranceNotReachedError("adaptive_simpson: evaluation budget exhausted", whole, tol);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0)
    throw ToleranceNotReachedError("adaptive_simpson: depth exhausted", left + right,
                                   std::fabs(err));
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, budget) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b);
  const double m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  long budget = 2000000;
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 60, budget);
}

DifferentialKernel kernel_from_bc(std::function<double(double)> b,
                                  std::function<double(double)> c) {
  DifferentialKernel k;
  k.id = "from_bc";
  k.eval = [b, c](double t, double tau) {
    const double integral = adaptive_simpson(b, tau, t);
    return (1.0 + c(tau)) * std::exp(-integral);
  };
  k.b = b;
  return k;
}

double check_anti_transpose(const DifferentialKernel& k1, const DifferentialKernel& k2, double T,
                            int grid) {
  double worst = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double t = T * i / (grid + 1);
    for (int j = 1; j <= i; ++j) {
      const double tau = T * j / (grid + 1);
      worst = std::max(worst, std::fabs(k1.eval(t, tau) - k2.eval(T - tau, T - t)));
    }
  }
  return worst;
}

std::vector<Eigen::VectorXd> run_fsfo(const DifferenceMatrix& m, const Objective& obj, double s,
                                      const Eigen::VectorXd& y0) {
  if (!(s > 0.0)) throw std::invalid_argument("run_fsfo: s must be positive");
  std::vector<Eigen::VectorXd> ys = {y0};
  std::vector<Eigen::VectorXd> grads;
  const double guard = 1e12 * std::max(1.0, std::fabs(obj.value(y0)));
  for (int i = 0; i < m.N(); ++i) {
    grads.push_back(obj.gradient(ys.back()));
    Eigen::VectorXd y = ys.back();
    for (int j = 0; j <= i; ++j) y -= s * m.h(i, j) * grads[j];
    if (!y.allFinite() || obj.value(y) > guard)
      throw DivergenceError("run_fsfo: divergence at step " + std::to_string(i), i);
    ys.push_back(std::move(y));
  }
  return ys;
}

std::vector<double> kernel_limit_convergence(
    const std::function<DifferenceMatrix(double, int)>& matrix_family,
    const DifferentialKernel& kernel, double t, double tau, const std::vector<double>& stepsizes) {
  std::vector<double> devs;
  devs.reserve(stepsizes.size());
  const double href = kernel.eval(t, tau);
  for (double s : stepsizes) {
    const double rs = std::sqrt(s);
    const int i = static_cast<int>(std::floor(t / rs));
    const int j = static_cast<int>(std::floor(tau / rs));
    const DifferenceMatrix m = matrix_family(s, i + 1);
    devs.push_back(std::fabs(m.h(i, j) - href));
  }
  return devs;
}

void write_kernel_grid(const DifferentialKernel& k, double T, int grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_kernel_grid: cannot open " + path);
  out << "t,tau,H\n";
  out.precision(17);
  for (int i = 1; i <= grid; ++i) {
    const double t = T * i / (grid + 1);
    for (int j = 1; j <= i; ++j) {
      const double tau = T * j / (grid + 1);
      out << t << "," << tau << "," << k.eval(t, tau) << "\n";
    }
  }
}

}  // namespace um
