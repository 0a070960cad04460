#include "um/flows.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "um/errors.hpp"
#include "um/hyperbolic.hpp"

namespace um {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string flow_name(FlowId id) {
  switch (id) {
    case FlowId::NagCSys: return "nag_c_sys";
    case FlowId::NagScSys: return "nag_sc_sys";
    case FlowId::UnifiedNagSys: return "unified_nag_sys";
    case FlowId::UnifiedLagrangian: return "unified_lagrangian";
    case FlowId::TensorFlow: return "tensor_flow";
    case FlowId::OriginalNagFlow: return "original_nag_flow";
    case FlowId::NagG: return "nag_g";
  }
  return "unknown";
}

FlowSpec FlowSpec::nag_c() {
  FlowSpec f;
  f.id = FlowId::NagCSys;
  f.singular_start = true;
  f.tau0 = 2.0;
  f.series_q = 2.0;
  f.tau = [](double t) { return 2.0 / t; };
  f.c1 = [](double) { return 0.0; };
  f.c2 = [](double t) { return 0.5 * t; };
  f.c2_int = [](double e) { return 0.25 * e * e; };
  return f;
}

FlowSpec FlowSpec::nag_sc(double mu) {
  FlowSpec f;
  f.id = FlowId::NagScSys;
  f.mu = mu;
  f.xv_shape = true;
  f.damping = [mu](double) { return 2.0 * std::sqrt(mu); };
  return f;
}

FlowSpec FlowSpec::unified_nag(double mu) {
  FlowSpec f;
  f.id = FlowId::UnifiedNagSys;
  f.mu = mu;
  f.singular_start = true;
  f.tau0 = 2.0;
  f.series_q = 2.0;
  const double rmu = std::sqrt(mu);
  f.tau = [rmu](double t) { return 2.0 / t * cothc(0.5 * rmu * t); };
  f.c2 = [rmu](double t) { return 0.5 * t * tanhc(0.5 * rmu * t); };
  f.c1 = [mu, c2 = f.c2](double t) { return mu * c2(t); };
  f.c2_int = [](double e) { return 0.25 * e * e; };
  f.beta_exp = [rmu](double t) {
    const double sc = sinhc(0.5 * rmu * t);
    return 0.25 * t * t * sc * sc;
  };
  return f;
}

FlowSpec FlowSpec::tensor_flow(int p, double C, double mu) {
  FlowSpec f;
  f.id = FlowId::TensorFlow;
  f.mu = mu;
  f.p = p;
  f.C = C;
  f.mirror = p_norm_mirror(p);
  f.singular_start = true;
  f.tau0 = static_cast<double>(p);
  f.series_q = static_cast<double>(p);  // adjusted for mirror origin in integrate_flow
  if (p > 2) f.sinhp = std::make_shared<HigherHyperbolicTable>(p);
  const double c1arg = std::pow(C * mu, 1.0 / p);  // C^{1/p} mu^{1/p}
  auto tab = f.sinhp;
  auto cothc_p = [p, tab](double u) {
    if (p == 2) return cothc(u);
    if (u == 0.0) return 1.0;
    const auto [sv, cv] = tab->eval_extending(u);
    return u * cv / sv;
  };
  auto tanhc_p = [p, tab](double u) {
    if (p == 2) return tanhc(u);
    if (u == 0.0) return 1.0;
    const auto [sv, cv] = tab->eval_extending(u);
    return sv / (u * cv);
  };
  f.tau = [p, c1arg, cothc_p](double t) {
    return static_cast<double>(p) / t * cothc_p(c1arg * t);
  };
  f.c2 = [p, C, c1arg, tanhc_p](double t) {
    return C * p * std::pow(t, p - 1) * std::pow(tanhc_p(c1arg * t), p - 1);
  };
  f.c1 = [mu, c2 = f.c2](double t) { return mu * c2(t); };
  f.c2_int = [p, C](double e) { return C * std::pow(e, p); };
  f.beta_exp = [p, C, c1arg, tab](double t) {
    if (t == 0.0) return 0.0;
    double sc = 1.0;
    if (c1arg > 0.0) {
      const double u = c1arg * t;
      sc = (p == 2) ? sinhc(u) : tab->eval_extending(u).first / u;
    }
    return C * std::pow(t * sc, p);
  };
  return f;
}

FlowSpec FlowSpec::original_nag_flow(double mu, double gamma0) {
  if (!(gamma0 > 0.0)) throw std::invalid_argument("original_nag_flow: gamma0 must be positive");
  FlowSpec f;
  f.id = FlowId::OriginalNagFlow;
  f.mu = mu;
  f.gamma0 = gamma0;
  auto gamma = [mu, gamma0](double t) { return mu + (gamma0 - mu) * std::exp(-t); };
  f.tau = [](double) { return 1.0; };
  f.c1 = [mu, gamma](double t) { return mu / gamma(t); };
  f.c2 = [gamma](double t) { return 1.0 / gamma(t); };
  return f;
}

FlowSpec FlowSpec::lagrangian(double mu, std::function<double(double)> alpha_exp,
                              std::function<double(double)> beta_exp,
                              std::function<double(double)> beta_dot) {
  FlowSpec f;
  f.id = FlowId::UnifiedLagrangian;
  f.mu = mu;
  f.tau = alpha_exp;
  f.beta_exp = beta_exp;
  f.c1 = [mu, beta_exp, beta_dot](double t) {
    const double eb = beta_exp(t);
    return mu * beta_dot(t) * eb / (1.0 + mu * eb);
  };
  f.c2 = [mu, alpha_exp, beta_exp](double t) {
    const double eb = beta_exp(t);
    return alpha_exp(t) * eb / (1.0 + mu * eb);
  };
  return f;
}

FlowSpec FlowSpec::lagrangian_from_original(double mu, double gamma0) {
  if (!(gamma0 > mu))
    throw std::invalid_argument("lagrangian_from_original: requires gamma0 > mu");
  auto aexp = [](double) { return 1.0; };
  auto bexp = [mu, gamma0](double t) { return std::exp(t) / (gamma0 - mu); };
  auto bdot = [](double) { return 1.0; };
  FlowSpec f = lagrangian(mu, aexp, bexp, bdot);
  f.gamma0 = gamma0;
  return f;
}

FlowSpec FlowSpec::nag_g(double mu, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("nag_g: T must be positive");
  FlowSpec f;
  f.id = FlowId::NagG;
  f.mu = mu;
  f.T = T;
  f.xv_shape = true;
  const double rmu = std::sqrt(mu);
  f.damping = [rmu, T](double t) {
    const double r = T - t;
    return 0.5 * rmu * std::tanh(0.5 * rmu * r) + 3.0 / r * cothc(0.5 * rmu * r);
  };
  return f;
}

namespace {

using Deriv = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

Deriv make_deriv(const FlowSpec& spec, const Objective& obj) {
  const int n = obj.n;
  if (spec.xv_shape) {
    return [&spec, &obj, n](double t, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
      du.head(n) = u.tail(n);
      du.tail(n) = -spec.damping(t) * u.tail(n) - obj.gradient(u.head(n));
    };
  }
  return [&spec, &obj, n](double t, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
    const auto x = u.head(n);
    const auto w = u.tail(n);
    const Eigen::VectorXd z =
        spec.mirror.p == 2 ? Eigen::VectorXd(w) : spec.mirror.grad_h_star(w);
    du.head(n) = spec.tau(t) * (z - x);
    const Eigen::VectorXd hx = spec.mirror.p == 2 ? Eigen::VectorXd(x) : spec.mirror.grad_h(x);
    du.tail(n) = spec.c1(t) * (hx - w) - spec.c2(t) * obj.gradient(x);
  };
}

// Display-oriented Z for a node: the mirror image for tensor flows, the
// recovered Z = X + V / sqrt(mu) for the NAG-SC system, V itself
// otherwise.
Eigen::VectorXd display_z(const FlowSpec& spec, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& second) {
  if (spec.xv_shape) {
    if (spec.id == FlowId::NagScSys && spec.mu > 0.0)
      return x + second / std::sqrt(spec.mu);
    return second;
  }
  if (spec.mirror.p != 2) return spec.mirror.grad_h_star(second);
  return second;
}

}  // namespace

Trajectory integrate_flow(const FlowSpec& spec, const Objective& obj, const Eigen::VectorXd& x0,
                          double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow: dt must be positive");
  const int n = obj.n;
  double t = 0.0;
  Eigen::VectorXd state(2 * n);

  if (spec.singular_start) {
    const double eps = 10.0 * dt;
    if (!(horizon > eps)) throw std::invalid_argument("integrate_flow: horizon too short");
    const Eigen::VectorXd g0 = obj.gradient(x0);
    Eigen::VectorXd w0 = spec.mirror.p == 2 ? Eigen::VectorXd(x0) : spec.mirror.grad_h(x0);
    w0 -= spec.c2_int(eps) * g0;
    const Eigen::VectorXd z0 = spec.mirror.p == 2 ? w0 : spec.mirror.grad_h_star(w0);
    double q = spec.series_q;
    if (spec.mirror.p > 2 && x0.norm() == 0.0) q = spec.series_q / (spec.mirror.p - 1.0);
    state.head(n) = x0 + spec.tau0 / (q + spec.tau0) * (z0 - x0);
    state.tail(n) = w0;
    t = eps;
  } else if (spec.xv_shape) {
    state.head(n) = x0;
    state.tail(n).setZero();
  } else {
    state.head(n) = x0;
    state.tail(n) = spec.mirror.p == 2 ? Eigen::VectorXd(x0) : spec.mirror.grad_h(x0);
  }

  const Deriv deriv = make_deriv(spec, obj);
  const long steps = std::lround((horizon - t) / dt);

  Trajectory traj;
  traj.meta["flow"] = flow_name(spec.id);
  traj.meta["problem"] = obj.id;
  traj.meta["dt"] = std::to_string(dt);
  traj.meta["mu"] = std::to_string(spec.mu);
  traj.f_star = obj.min_value;
  traj.nodes.reserve(static_cast<std::size_t>(steps) + 1);

  Eigen::VectorXd k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
  const bool diag = obj.minimizer && obj.min_value;

  auto push_node = [&](double tn, const Eigen::VectorXd& u) {
    TrajNode nd;
    nd.t = tn;
    nd.x = u.head(n);
    nd.z = display_z(spec, nd.x, u.tail(n));
    deriv(tn, u, tmp);
    nd.dx = tmp.head(n);
    nd.dz = tmp.tail(n);
    nd.f_raw = obj.value(nd.x);
    if (diag) {
      try {
        nd.energy = energy_continuous(spec, nd, obj);
      } catch (const UnsupportedDiagnosticError&) {
        nd.energy = kNaN;
      }
      nd.bound = bound_continuous(spec, nd, x0, obj);
    } else {
      nd.energy = kNaN;
      nd.bound = kNaN;
    }
    traj.nodes.push_back(std::move(nd));
  };

  push_node(t, state);
  for (long i = 0; i < steps; ++i) {
    deriv(t, state, k1);
    tmp = state + 0.5 * dt * k1;
    deriv(t + 0.5 * dt, tmp, k2);
    tmp = state + 0.5 * dt * k2;
    deriv(t + 0.5 * dt, tmp, k3);
    tmp = state + dt * k3;
    deriv(t + dt, tmp, k4);
    state += dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    t += dt;
    if (!state.allFinite())
      throw DivergenceError("integrate_flow: non-finite state at t = " + std::to_string(t), i);
    push_node(t, state);
  }
  return traj;
}

double energy_continuous(const FlowSpec& spec, const TrajNode& node, const Objective& obj) {
  if (!obj.minimizer || !obj.min_value)
    throw UnsupportedDiagnosticError("energy_continuous: objective lacks minimizer: " + obj.id);
  const Eigen::VectorXd& xs = *obj.minimizer;
  const double gap = node.f_raw - *obj.min_value;
  const double t = node.t;
  switch (spec.id) {
    case FlowId::NagCSys:
      return 0.5 * (node.z - xs).squaredNorm() + 0.25 * t * t * gap;
    case FlowId::NagScSys: {
      if (spec.mu == 0.0) return 0.5 * node.z.squaredNorm() + gap;  // z slot holds V
      const double w = std::exp(std::sqrt(spec.mu) * t);
      return w * (0.5 * spec.mu * (node.z - xs).squaredNorm() + gap);
    }
    case FlowId::UnifiedNagSys: {
      const double th = 0.5 * std::sqrt(spec.mu) * t;
      const double ch = std::cosh(th), sc = sinhc(th);
      return 0.5 * ch * ch * (node.z - xs).squaredNorm() + 0.25 * t * t * sc * sc * gap;
    }
    case FlowId::UnifiedLagrangian: {
      const double eb = spec.beta_exp(t);
      return (1.0 + spec.mu * eb) * 0.5 * (node.z - xs).squaredNorm() + eb * gap;
    }
    case FlowId::TensorFlow: {
      const double A = spec.beta_exp(t);  // C t^p sinhc_p^p
      return (1.0 + spec.mu * A) * spec.mirror.bregman(xs, node.z) + A * gap;
    }
    case FlowId::OriginalNagFlow:
      throw UnsupportedDiagnosticError("original-NAG flow has no catalog Lyapunov function");
    case FlowId::NagG:
      throw UnsupportedDiagnosticError("NAG-G energy is posterior; use energy_nag_g");
  }
  return kNaN;
}

double bound_continuous(const FlowSpec& spec, const TrajNode& node, const Eigen::VectorXd& x0,
                        const Objective& obj) {
  if (!obj.minimizer || !obj.min_value) return kNaN;
  const Eigen::VectorXd& xs = *obj.minimizer;
  const double t = node.t;
  switch (spec.id) {
    case FlowId::NagCSys:
      return t > 0.0 ? 2.0 * (x0 - xs).squaredNorm() / (t * t)
                     : std::numeric_limits<double>::infinity();
    case FlowId::NagScSys: {
      const double gap0 = obj.value(x0) - *obj.min_value;
      return std::exp(-std::sqrt(spec.mu) * t) *
             (0.5 * spec.mu * (x0 - xs).squaredNorm() + gap0);
    }
    case FlowId::UnifiedNagSys: {
      if (t <= 0.0) return std::numeric_limits<double>::infinity();
      const double cs = cschc(0.5 * std::sqrt(spec.mu) * t);
      return 2.0 / (t * t) * cs * cs * (x0 - xs).squaredNorm();
    }
    case FlowId::UnifiedLagrangian: {
      const double eb = spec.beta_exp(t);
      const double eb0 = spec.beta_exp(0.0);
      const double gap0 = obj.value(x0) - *obj.min_value;
      const double e0 = (1.0 + spec.mu * eb0) * 0.5 * (x0 - xs).squaredNorm() + eb0 * gap0;
      return e0 / eb;
    }
    case FlowId::TensorFlow: {
      const double A = spec.beta_exp(t);
      if (A <= 0.0) return std::numeric_limits<double>::infinity();
      return spec.mirror.bregman(xs, x0) / A;
    }
    case FlowId::OriginalNagFlow:
    case FlowId::NagG:
      return kNaN;
  }
  return kNaN;
}

NagGResult integrate_nag_g(const Objective& obj, const Eigen::VectorXd& x0, double mu, double T,
                           double dt) {
  const FlowSpec spec = FlowSpec::nag_g(mu, T);
  const double eps_end = 10.0 * dt;
  if (!(T > 2.0 * eps_end)) throw std::invalid_argument("integrate_nag_g: T too short for dt");
  NagGResult res;
  res.trajectory = integrate_flow(spec, obj, x0, T - eps_end, dt);
  const TrajNode& last = res.trajectory.nodes.back();
  // Near T: X(t) ~ X(T) + (1/4) grad f(X(T)) (t - T)^2, dX(T) = 0.
  const double r = T - last.t;
  Eigen::VectorXd xT = last.x;
  xT = last.x - 0.25 * r * r * obj.gradient(xT);
  res.x_T = xT;
  res.grad_norm_sq_T = obj.gradient(xT).squaredNorm();
  return res;
}

double energy_nag_g(const TrajNode& node, const Eigen::VectorXd& x_T, double mu, double T,
                    const Objective& obj) {
  const double r = T - node.t;
  if (!(r > 0.0)) throw std::domain_error("energy_nag_g: node beyond the horizon");
  const double th = 0.5 * std::sqrt(mu) * r;
  const double cs = cschc(th);
  const double co = cothc(th);
  const double ta = tanhc(th);
  const double fT = obj.value(x_T);
  const double r2 = r * r;
  const Eigen::VectorXd diff = node.x - x_T;
  const Eigen::VectorXd chord = node.x + 0.5 * r * ta * node.dx - x_T;
  return 4.0 / r2 * cs * cs * (node.f_raw - fT) -
         8.0 / (r2 * r2) * cs * cs * cs * cs * diff.squaredNorm() +
         8.0 / (r2 * r2) * cs * cs * co * co * chord.squaredNorm();
}

double nag_g_bound(const Eigen::VectorXd& x0, const Eigen::VectorXd& x_T, double mu, double T,
                   const Objective& obj) {
  if (!obj.min_value)
    throw UnsupportedDiagnosticError("nag_g_bound: objective lacks min_value: " + obj.id);
  const double cs = cschc(0.5 * std::sqrt(mu) * T);
  return 8.0 / (T * T) * cs * cs *
         (obj.value(x0) - *obj.min_value + 0.5 * mu * (x0 - x_T).squaredNorm());
}

TimeDilation TimeDilation::identity(const FlowSpec& spec) {
  TimeDilation d;
  d.flow1 = spec;
  d.flow2 = spec;
  d.map = [](double t) { return t; };
  return d;
}

TimeDilation TimeDilation::unified_to_tensor(double mu, int p, double C) {
  TimeDilation d;
  d.flow1 = FlowSpec::unified_nag(mu);
  d.flow2 = FlowSpec::tensor_flow(p, C, mu);
  auto A1 = [mu](double y) {
    const double sc = sinhc(0.5 * std::sqrt(mu) * y);
    return 0.25 * y * y * sc * sc;
  };
  auto A2 = d.flow2.beta_exp;
  d.map = [A1, A2](double t) {
    const double target = A2(t);
    if (target <= 0.0) return 0.0;
    double lo = 0.0, hi = 2.0 * std::sqrt(target);  // A1(y) >= y^2/4
    while (A1(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (A1(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return d;
}

TimeDilation TimeDilation::linear_speedup(double mu, double c,
                                          std::function<double(double)> alpha_exp,
                                          std::function<double(double)> beta_exp,
                                          std::function<double(double)> beta_dot) {
  TimeDilation d;
  d.flow1 = FlowSpec::lagrangian(mu, alpha_exp, beta_exp, beta_dot);
  d.flow2 = FlowSpec::lagrangian(
      mu, [alpha_exp, c](double t) { return c * alpha_exp(c * t); },
      [beta_exp, c](double t) { return beta_exp(c * t); },
      [beta_dot, c](double t) { return c * beta_dot(c * t); });
  d.map = [c](double t) { return c * t; };
  return d;
}

double verify_time_dilation(const TimeDilation& dil, const Objective& obj,
                            const Eigen::VectorXd& x0, double t_lo, double t_hi, double dt) {
  const Trajectory traj2 = integrate_flow(dil.flow2, obj, x0, t_hi, dt);
  const Trajectory traj1 = integrate_flow(dil.flow1, obj, x0, dil.map(t_hi) + dt, dt);
  double worst = 0.0;
  for (const TrajNode& nd : traj2.nodes) {
    if (nd.t < t_lo || nd.t > t_hi) continue;
    const Eigen::VectorXd x1 = traj1.interp_x(dil.map(nd.t));
    worst = std::max(worst, (nd.x - x1).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double ode_residual(const FlowSpec& spec, const Trajectory& traj, const Objective& obj) {
  if (traj.nodes.size() < 5) throw std::invalid_argument("ode_residual: need >= 5 nodes");
  if (!spec.xv_shape && spec.mirror.p != 2)
    throw std::invalid_argument("ode_residual: only Euclidean flows supported");

  auto damping = [&](double t) {
    if (spec.xv_shape) return spec.damping(t);
    const double h = 1e-6 * std::max(1.0, t);
    const double taudot = (spec.tau(t + h) - spec.tau(t - h)) / (2.0 * h);
    return spec.tau(t) + spec.c1(t) - taudot / spec.tau(t);
  };
  auto grad_coef = [&](double t) {
    return spec.xv_shape ? 1.0 : spec.tau(t) * spec.c2(t);
  };

  // Skip the singular buffer at the front and the one-sided stencils.
  const std::size_t lo = 10, hi = traj.nodes.size() - 2;
  double worst = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const TrajNode& a = traj.nodes[i - 1];
    const TrajNode& b = traj.nodes[i];
    const TrajNode& c = traj.nodes[i + 1];
    const double h = b.t - a.t;
    const Eigen::VectorXd xdd = (c.x - 2.0 * b.x + a.x) / (h * h);
    const Eigen::VectorXd xd = (c.x - a.x) / (2.0 * h);
    const Eigen::VectorXd res = xdd + damping(b.t) * xd + grad_coef(b.t) * obj.gradient(b.x);
    worst = std::max(worst, res.norm());
  }
  return worst;
}

}  // namespace um
