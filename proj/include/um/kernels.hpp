#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "um/problems.hpp"

namespace um {

enum class MatrixOrigin { Ogm, OgmG, FromTwoSeq };

// Lower-triangular step-coefficient matrix of a fixed-step first-order
// scheme y_{i+1} = y_i - s sum_{j<=i} h_ij grad f(y_j).
struct DifferenceMatrix {
  Eigen::MatrixXd h;  // N x N, strictly lower-right entries zero
  MatrixOrigin origin = MatrixOrigin::FromTwoSeq;

  int N() const { return static_cast<int>(h.rows()); }

  // CSV rows i,j,h_ij over the lower triangle.
  void write_csv(const std::string& path) const;
};

// theta_0..theta_N of the OGM/OGM-G stepsize recursion.
std::vector<double> theta_sequence(int N);

// OGM and OGM-G difference matrices. The published recursion's case
// labels are read with the column index j (including the theta
// subscripts of the OGM-G rows); the anti-transpose identity
// h^F_{ij} = h^G_{N-1-j,N-1-i} holds exactly under this reading and is
// what the tests pin down.
DifferenceMatrix build_HF(int N);
DifferenceMatrix build_HG(int N);

// h_ij = (beta_j + gamma_j) prod_{v=j+1..i} beta_v + [i == j].
DifferenceMatrix matrix_from_two_sequence(const std::vector<double>& beta,
                                          const std::vector<double>& gamma, int N);

// Differential kernel H(t, tau) on 0 < tau <= t < T.
struct DifferentialKernel {
  std::string id;
  double T = 0.0;  // 0 when the domain is unbounded
  std::function<double(double, double)> eval;
  std::function<double(double)> b;  // damping function, when known
};

DifferentialKernel kernel_nag_c();
DifferentialKernel kernel_nag_sc(double mu);
DifferentialKernel kernel_ogm();
DifferentialKernel kernel_ogm_g(double T);
DifferentialKernel kernel_unified_nag(double mu);
DifferentialKernel kernel_unified_nag_g(double mu, double T);

// H(t,tau) = (1 + c(tau)) exp(-int_tau^t b), the integral by adaptive
// Simpson quadrature to 1e-10.
DifferentialKernel kernel_from_bc(std::function<double(double)> b,
                                  std::function<double(double)> c);

// Adaptive Simpson quadrature; throws ToleranceNotReachedError when the
// recursion depth is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

// max |H1(t,tau) - H2(T-tau, T-t)| over an interior grid of size
// grid x grid on (0, T).
double check_anti_transpose(const DifferentialKernel& k1, const DifferentialKernel& k2, double T,
                            int grid);

// Execute the fixed-step scheme; returns y_0..y_N.
std::vector<Eigen::VectorXd> run_fsfo(const DifferenceMatrix& m, const Objective& obj, double s,
                                      const Eigen::VectorXd& y0);

// |h_{floor(t/sqrt(s)), floor(tau/sqrt(s))} - H(t,tau)| per stepsize.
std::vector<double> kernel_limit_convergence(
    const std::function<DifferenceMatrix(double, int)>& matrix_family,
    const DifferentialKernel& kernel, double t, double tau, const std::vector<double>& stepsizes);

// Kernel grid dump: CSV t,tau,H on an interior grid.
void write_kernel_grid(const DifferentialKernel& k, double T, int grid, const std::string& path);

}  // namespace um
