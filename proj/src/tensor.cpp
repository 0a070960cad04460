#include "um/tensor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "um/errors.hpp"
#include "um/hyperbolic.hpp"

namespace um {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double MirrorMap::h(const Eigen::VectorXd& x) const {
  return std::pow(x.norm(), p) / static_cast<double>(p);
}

Eigen::VectorXd MirrorMap::grad_h(const Eigen::VectorXd& x) const {
  if (p == 2) return x;
  const double r = x.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  return std::pow(r, p - 2) * x;
}

Eigen::VectorXd MirrorMap::grad_h_star(const Eigen::VectorXd& w) const {
  if (p == 2) return w;
  const double r = w.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(w.size());
  return std::pow(r, (2.0 - p) / (p - 1.0)) * w;
}

double MirrorMap::bregman(const Eigen::VectorXd& y, const Eigen::VectorXd& x) const {
  if (p == 2) return 0.5 * (y - x).squaredNorm();
  return h(y) - h(x) - grad_h(x).dot(y - x);
}

MirrorMap p_norm_mirror(int p) {
  if (p < 2) throw std::invalid_argument("p_norm_mirror: p must be >= 2");
  MirrorMap m;
  m.p = p;
  return m;
}

Eigen::VectorXd tensor_update(const Objective& obj, const Eigen::VectorXd& y, int p, double s,
                              double N) {
  if (!(N > 0.0)) throw std::invalid_argument("tensor_update: N must be positive");
  if (p == 2) return y - s * obj.gradient(y);
  if (p != 3) throw SubsolverError("tensor_update: only p in {2,3} is supported");
  if (!obj.has_hessian())
    throw SubsolverError("tensor_update: p = 3 requires the objective's Hessian");

  const Eigen::VectorXd g = obj.gradient(y);
  const double gn = g.norm();
  if (gn == 0.0) return y;
  const Eigen::MatrixXd H = obj.hessian(y);

  // First-order condition: (H + (N r / s) I) d = -g with r = |d|.
  // phi(r) = |d(r)| - r is strictly decreasing; bisect its root.
  auto step_norm = [&](double r) {
    Eigen::MatrixXd M = H;
    M.diagonal().array() += N * r / s;
    return Eigen::VectorXd(M.ldlt().solve(-g)).norm();
  };
  double hi = std::sqrt(s * gn / N);  // |d| <= sqrt(s |g| / N) at the optimum
  int guard = 0;
  while (step_norm(hi) > hi) {
    hi *= 2.0;
    if (++guard > 200) throw SubsolverError("tensor_update: failed to bracket the step norm");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (step_norm(mid) > mid ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  Eigen::MatrixXd M = H;
  M.diagonal().array() += N * r / s;
  return y + Eigen::VectorXd(M.ldlt().solve(-g));
}

double check_M_ineq(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    int p, double s, double M) {
  const Eigen::VectorXd g = obj.gradient(x);
  const double q = static_cast<double>(p) / (p - 1.0);
  return g.dot(y - x) - M * std::pow(s, 1.0 / (p - 1.0)) * std::pow(g.norm(), q);
}

double default_N(int p) { return p == 2 ? 1.0 : 2.0; }

double default_M(int p, double N) {
  if (p == 2) return 0.5;
  return (N - 1.0) / std::pow(N + 1.0, 1.5);
}

double tensor_C(int p, double M) {
  return std::pow(M / (p - 1.0), p - 1) / static_cast<double>(p);
}

double next_Ak(double A_k, int p, double s, double mu, double C) {
  if (A_k < 0.0) throw std::invalid_argument("next_Ak: A_k must be >= 0");
  const double c = C * std::pow(static_cast<double>(p), p) * s;
  if (A_k == 0.0) return c;  // A^{p-1} (A - c) = 0, largest root A = c
  auto psi = [&](double A) {
    return std::pow(A - A_k, p) - c * std::pow(A, p - 1) * (1.0 + mu * A_k);
  };
  double lo = A_k;
  double hi = A_k + std::pow(c * std::pow(A_k, p - 1) * (1.0 + mu * A_k), 1.0 / p);
  int guard = 0;
  while (psi(hi) <= 0.0) {
    hi = A_k + 2.0 * (hi - A_k);
    if (++guard > 400) throw std::runtime_error("next_Ak: bracketing failed");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double A_of_t(double t, int p, double C, double mu, HigherHyperbolicTable* table) {
  if (t == 0.0) return 0.0;
  if (mu == 0.0) return C * std::pow(t, p);
  const double arg = std::pow(C, 1.0 / p) * std::pow(mu, 1.0 / p) * t;
  double sc;  // sinhc_p(arg)
  if (p == 2) {
    sc = sinhc(arg);
  } else {
    if (!table) throw std::invalid_argument("A_of_t: p > 2 requires a sinh_p table");
    sc = table->eval_extending(arg).first / arg;
  }
  return C * std::pow(t * sc, p);
}

double t_of_A(double A, int p, double C, double mu, HigherHyperbolicTable* table) {
  if (A < 0.0) throw std::invalid_argument("t_of_A: A must be >= 0");
  if (A == 0.0) return 0.0;
  if (mu == 0.0) return std::pow(A / C, 1.0 / p);
  double lo = 0.0, hi = std::pow(A / C, 1.0 / p);  // sinhc_p >= 1 shrinks t
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (A_of_t(mid, p, C, mu, table) < A ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double wibisono_tk(long k, int p, double s) {
  double prod = 1.0;
  for (int i = 0; i < p; ++i) prod *= static_cast<double>(k + i);
  return std::pow(s, 1.0 / p) * std::pow(prod, 1.0 / p);
}

TensorRunState make_tensor_state(const Eigen::VectorXd& x0, int p, double s, double mu, double N,
                                 double M) {
  TensorRunState st;
  st.x = st.y = st.z = x0;
  st.p = p;
  st.s = s;
  st.mu = mu;
  st.N = N;
  st.M = M;
  st.C = tensor_C(p, M);
  st.A_k = 0.0;
  st.t_k = 0.0;
  return st;
}

TensorRunState step_unified_tensor(const TensorRunState& state, const Objective& obj,
                                   const MirrorMap& mirror) {
  return step_unified_tensor(state, obj, mirror,
                             next_Ak(state.A_k, state.p, state.s, state.mu, state.C));
}

TensorRunState step_unified_tensor(const TensorRunState& state, const Objective& obj,
                                   const MirrorMap& mirror, double A_next) {
  if (mirror.p != state.p)
    throw std::invalid_argument("step_unified_tensor: mirror order mismatch");
  if (!(A_next > state.A_k))
    throw std::invalid_argument("step_unified_tensor: A_{k+1} must exceed A_k");
  TensorRunState nxt = state;
  nxt.k = state.k + 1;
  const double A1 = A_next;
  nxt.A_k = A1;
  nxt.y = state.x + (A1 - state.A_k) / A1 * (state.z - state.x);
  nxt.x = tensor_update(obj, nxt.y, state.p, state.s, state.N);
  const double c = (A1 - state.A_k) / (1.0 + state.mu * state.A_k);
  const Eigen::VectorXd w =
      (mirror.grad_h(state.z) + c * (state.mu * mirror.grad_h(nxt.x) - obj.gradient(nxt.x))) /
      (1.0 + state.mu * c);
  nxt.z = mirror.grad_h_star(w);
  if (!nxt.x.allFinite() || !nxt.z.allFinite())
    throw DivergenceError("step_unified_tensor: non-finite state", state.k);
  return nxt;
}

double energy_tensor(const TensorRunState& state, const Objective& obj, const MirrorMap& mirror) {
  if (!obj.minimizer || !obj.min_value)
    throw UnsupportedDiagnosticError("energy_tensor: objective lacks minimizer: " + obj.id);
  return (1.0 + state.mu * state.A_k) * mirror.bregman(*obj.minimizer, state.z) +
         state.A_k * (obj.value(state.x) - *obj.min_value);
}

RunTrace run_unified_tensor(const Objective& obj, const Eigen::VectorXd& x0, int p, double s,
                            double mu, long K, double N, double M) {
  if (N <= 0.0) N = default_N(p);
  if (M <= 0.0) M = default_M(p, N);
  const MirrorMap mirror = p_norm_mirror(p);
  TensorRunState st = make_tensor_state(x0, p, s, mu, N, M);

  HigherHyperbolicTable table(std::max(p, 2));
  HigherHyperbolicTable* tab = p > 2 ? &table : nullptr;

  RunTrace trace;
  trace.tensor_columns = true;
  trace.meta["scheme"] = "unified_tensor(p=" + std::to_string(p) + ")";
  trace.meta["problem"] = obj.id;
  trace.meta["s"] = std::to_string(s);
  trace.meta["mu"] = std::to_string(mu);
  trace.meta["N"] = std::to_string(N);
  trace.meta["M"] = std::to_string(M);
  trace.f_star = obj.min_value;

  const bool diag = obj.minimizer && obj.min_value;
  const double E0 = diag ? energy_tensor(st, obj, mirror) : kNaN;

  auto push = [&](const TensorRunState& cur, double m_res) {
    TraceRow row;
    row.k = cur.k;
    row.t = cur.t_k;
    row.f_raw = obj.value(cur.x);
    row.grad_norm = obj.gradient(cur.x).norm();
    row.energy = diag ? energy_tensor(cur, obj, mirror) : kNaN;
    row.bound = (diag && cur.A_k > 0.0) ? E0 / cur.A_k
                                        : std::numeric_limits<double>::infinity();
    row.A_k = cur.A_k;
    row.M_residual = m_res;
    trace.rows.push_back(row);
  };

  push(st, 0.0);
  for (long k = 0; k < K; ++k) {
    TensorRunState nxt = step_unified_tensor(st, obj, mirror);
    nxt.t_k = t_of_A(nxt.A_k, p, st.C, mu, tab);
    const double m_res = check_M_ineq(obj, nxt.x, nxt.y, p, s, M);
    push(nxt, m_res);
    st = std::move(nxt);
  }
  trace.meta["status"] = "ok";
  return trace;
}

}  // namespace um
