#include "um/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "um/errors.hpp"
#include "um/hyperbolic.hpp"

namespace um {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::NagC: return "nag_c";
    case SchemeId::NagSc: return "nag_sc";
    case SchemeId::UnifiedConstant: return "unified_constant";
    case SchemeId::UnifiedAdaptive: return "unified_adaptive";
    case SchemeId::OriginalNag: return "original_nag";
  }
  return "unknown";
}

double collinearity_residual(double tau, double delta, double mu, double s) {
  return std::fabs(1.0 - mu * delta - (1.0 / s - mu) * tau * delta);
}

SchemeCoefficients SchemeCoefficients::nag_c(double s) {
  if (!(s > 0.0)) throw StepsizeError("nag_c: s must be positive");
  SchemeCoefficients c;
  c.id = SchemeId::NagC;
  c.mu = 0.0;
  c.s = s;
  return c;
}

SchemeCoefficients SchemeCoefficients::nag_sc(double mu, double s) {
  if (!(s > 0.0)) throw StepsizeError("nag_sc: s must be positive");
  if (!(mu > 0.0)) throw StepsizeError("nag_sc: mu must be positive");
  if (mu * s >= 1.0) throw StepsizeError("nag_sc: requires mu * s < 1");
  SchemeCoefficients c;
  c.id = SchemeId::NagSc;
  c.mu = mu;
  c.s = s;
  c.delta_const_ = -std::log1p(-std::sqrt(mu * s)) / std::sqrt(mu);
  return c;
}

SchemeCoefficients SchemeCoefficients::unified_constant(double mu, double s) {
  if (!(s > 0.0)) throw StepsizeError("unified_constant: s must be positive");
  if (mu < 0.0) throw StepsizeError("unified_constant: mu must be >= 0");
  if (mu * s >= 1.0) throw StepsizeError("unified_constant: requires mu * s < 1");
  SchemeCoefficients c;
  c.id = SchemeId::UnifiedConstant;
  c.mu = mu;
  c.s = s;
  if (mu > 0.0) {
    const double q = std::sqrt(mu * s);
    c.iota_ = -std::log1p(-q) / q;
    c.delta_const_ = -std::log1p(-q) / std::sqrt(mu);
  } else {
    c.iota_ = 1.0;
    c.delta_const_ = std::sqrt(s);
  }
  return c;
}

SchemeCoefficients SchemeCoefficients::unified_adaptive(double mu, double s, double t0) {
  if (!(s > 0.0)) throw StepsizeError("unified_adaptive: s must be positive");
  if (mu < 0.0) throw StepsizeError("unified_adaptive: mu must be >= 0");
  if (mu * s >= 1.0) throw StepsizeError("unified_adaptive: requires mu * s < 1");
  if (!(t0 > 0.0)) throw StepsizeError("unified_adaptive: t0 must be positive");
  SchemeCoefficients c;
  c.id = SchemeId::UnifiedAdaptive;
  c.mu = mu;
  c.s = s;
  c.t_ = t0;
  c.alpha_ = alpha_of_t(t0, mu, s);  // alpha_{-1}
  return c;
}

StepCoeffs SchemeCoefficients::next() {
  StepCoeffs out;
  const long k = k_;
  switch (id) {
    case SchemeId::NagC: {
      out.tau = 2.0 / static_cast<double>(k + 1);
      out.delta = s * static_cast<double>(k + 1) / 2.0;
      out.t_next = static_cast<double>(k + 1) * std::sqrt(s);
      break;
    }
    case SchemeId::NagSc: {
      const double q = std::sqrt(mu * s);
      out.tau = q / (1.0 + q);
      out.delta = std::sqrt(s / mu);
      out.t_next = static_cast<double>(k + 1) * delta_const_;
      break;
    }
    case SchemeId::UnifiedConstant: {
      if (mu == 0.0) {
        out.tau = 2.0 / static_cast<double>(k + 1);
        out.delta = s * static_cast<double>(k + 1) / 2.0;
        out.t_next = static_cast<double>(k + 1) * delta_const_;
      } else {
        const double t1 = static_cast<double>(k + 1) * delta_const_;
        const double th = 0.5 * std::sqrt(mu) * t1;
        out.tau = (2.0 * std::sqrt(s) / t1 * cothc(th) - mu * s) / (1.0 - mu * s);
        out.delta = std::sqrt(s) * t1 / 2.0 * tanhc(th);
        out.t_next = t1;
      }
      break;
    }
    case SchemeId::UnifiedAdaptive: {
      alpha_ = timestep_adaptive_next(alpha_, mu, s);
      out.tau = (alpha_ - mu * s) / (1.0 - mu * s);
      out.delta = s / alpha_;
      out.t_next = t_of_alpha(alpha_, mu, s);
      break;
    }
    case SchemeId::OriginalNag:
      throw std::logic_error("original NAG is stepped by run_original_nag");
  }
  ++k_;
  t_ = out.t_next;
  return out;
}

IterateState step_three_sequence(const IterateState& state, double tau, double delta, double mu,
                                 double s, const Objective& obj, double* grad_norm_out) {
  IterateState nxt;
  nxt.k = state.k + 1;
  nxt.y = state.x + tau * (state.z - state.x);
  const Eigen::VectorXd g = obj.gradient(nxt.y);
  if (!g.allFinite())
    throw DivergenceError("step_three_sequence: non-finite gradient at step " +
                              std::to_string(state.k),
                          state.k);
  if (grad_norm_out) *grad_norm_out = g.norm();
  nxt.x = nxt.y - s * g;
  nxt.z = state.z + delta * (mu * (nxt.y - state.z) - g);
  return nxt;
}

double energy_discrete_unified(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double t_k,
                               const Objective& obj, double mu) {
  if (!obj.minimizer || !obj.min_value)
    throw UnsupportedDiagnosticError("energy_discrete_unified: objective lacks minimizer: " +
                                     obj.id);
  const double th = 0.5 * std::sqrt(mu) * t_k;
  const double ch = std::cosh(th);
  const double sc = sinhc(th);
  const double gap = obj.value(x) - *obj.min_value;
  return 0.5 * ch * ch * (z - *obj.minimizer).squaredNorm() +
         0.25 * t_k * t_k * sc * sc * gap;
}

double bound_unified(double t_k, double t0, const Eigen::VectorXd& x0, const Objective& obj,
                     double mu) {
  if (!obj.minimizer || !obj.min_value)
    throw UnsupportedDiagnosticError("bound_unified: objective lacks minimizer: " + obj.id);
  if (t_k <= 0.0) return std::numeric_limits<double>::infinity();
  const double th0 = 0.5 * std::sqrt(mu) * t0;
  const double ch0 = std::cosh(th0);
  const double sc0 = sinhc(th0);
  const double e0 = 0.5 * ch0 * ch0 * (x0 - *obj.minimizer).squaredNorm() +
                    0.25 * t0 * t0 * sc0 * sc0 * (obj.value(x0) - *obj.min_value);
  const double cs = cschc(0.5 * std::sqrt(mu) * t_k);
  return 4.0 / (t_k * t_k) * cs * cs * e0;
}

namespace {

void fill_row(TraceRow& row, const Objective& obj, const IterateState& st, double grad_norm,
              bool diagnostics, double mu, double t0, const Eigen::VectorXd& x0) {
  row.k = st.k;
  row.t = st.t;
  row.f_raw = obj.value(st.x);
  row.grad_norm = grad_norm;
  if (diagnostics && obj.minimizer && obj.min_value) {
    row.energy = energy_discrete_unified(st.x, st.z, st.t, obj, mu);
    row.bound = bound_unified(st.t, t0, x0, obj, mu);
  } else {
    row.energy = kNaN;
    row.bound = kNaN;
  }
}

}  // namespace

RunTrace run_scheme(const Objective& obj, SchemeCoefficients coeffs, const Eigen::VectorXd& x0,
                    long K, const RunOptions& opts) {
  RunTrace trace;
  trace.meta["scheme"] = scheme_name(coeffs.id);
  trace.meta["problem"] = obj.id;
  trace.meta["s"] = std::to_string(coeffs.s);
  trace.meta["mu"] = std::to_string(coeffs.mu);
  trace.f_star = obj.min_value;

  const double t0 = coeffs.t();
  IterateState st;
  st.k = 0;
  st.t = t0;
  st.x = x0;
  st.z = x0;
  st.y = x0;

  const double f0 = obj.value(x0);
  const double guard = opts.divergence_factor * std::max(1.0, std::fabs(f0));
  trace.rows.reserve(static_cast<std::size_t>(K) + 1);

  // Row k carries |grad f(y_k)|, the single evaluation made by step k;
  // the final row falls back to |grad f(x_K)|.
  TraceRow row;
  fill_row(row, obj, st, 0.0, opts.record_diagnostics, coeffs.mu, t0, x0);
  trace.rows.push_back(row);

  for (long k = 0; k < K; ++k) {
    const StepCoeffs c = coeffs.next();
    double gn = 0.0;
    IterateState nxt;
    try {
      nxt = step_three_sequence(st, c.tau, c.delta, coeffs.mu, coeffs.s, obj, &gn);
    } catch (const DivergenceError&) {
      trace.meta["status"] = "diverged";
      throw;
    }
    nxt.t = c.t_next;
    trace.rows.back().grad_norm = gn;
    fill_row(row, obj, nxt, 0.0, opts.record_diagnostics, coeffs.mu, t0, x0);
    trace.rows.push_back(row);
    if (row.f_raw > guard) {
      trace.meta["status"] = "diverged";
      throw DivergenceError("run_scheme: divergence guard tripped", k);
    }
    st = std::move(nxt);
    if (opts.grad_stop && gn <= opts.grad_tol) break;
  }
  trace.rows.back().grad_norm = obj.gradient(st.x).norm();
  trace.meta["status"] = trace.meta.count("status") ? trace.meta["status"] : "ok";
  return trace;
}

RunTrace run_original_nag(const Objective& obj, double s, double gamma0,
                          const Eigen::VectorXd& x0, long K, const RunOptions& opts) {
  if (!(gamma0 > 0.0)) throw StepsizeError("run_original_nag: gamma0 must be positive");
  const double mu = obj.mu;
  if (mu * s >= 1.0) throw StepsizeError("run_original_nag: requires mu * s < 1");

  RunTrace trace;
  trace.meta["scheme"] = "original_nag";
  trace.meta["problem"] = obj.id;
  trace.meta["s"] = std::to_string(s);
  trace.meta["mu"] = std::to_string(mu);
  trace.meta["gamma0"] = std::to_string(gamma0);
  trace.f_star = obj.min_value;

  Eigen::VectorXd x = x0, z = x0;
  double gam = gamma0;
  double alpha_prod = 1.0;  // prod_{i<k} (1 - alpha_i)
  const bool diag = opts.record_diagnostics && obj.minimizer && obj.min_value;
  const double init = diag ? obj.value(x0) - *obj.min_value +
                                 0.5 * gamma0 * (x0 - *obj.minimizer).squaredNorm()
                           : kNaN;
  const bool has_t = gamma0 > mu;  // Prop-5 identification needs gamma_k > mu

  const double f0 = obj.value(x0);
  const double guard = opts.divergence_factor * std::max(1.0, std::fabs(f0));
  trace.rows.reserve(static_cast<std::size_t>(K) + 1);

  auto push = [&](long k, const Eigen::VectorXd& xk, const Eigen::VectorXd& zk) {
    TraceRow row;
    row.k = k;
    // The Prop-5 identification gamma_k <-> t_k degenerates (t -> inf)
    // once gamma_k reaches mu within rounding.
    const double alpha_g = std::sqrt(s * gam);
    const bool t_ok = has_t && alpha_g > std::sqrt(mu * s) * (1.0 + 1e-9);
    const double tk = t_ok ? t_of_alpha(alpha_g, mu, s) : kNaN;
    row.t = tk;
    row.f_raw = obj.value(xk);
    row.grad_norm = 0.0;
    row.energy = (diag && t_ok) ? energy_discrete_unified(xk, zk, tk, obj, mu) : kNaN;
    row.bound = diag ? alpha_prod * init : kNaN;
    trace.rows.push_back(row);
    return row.f_raw;
  };

  push(0, x, z);

  for (long k = 0; k < K; ++k) {
    // alpha_k in (0,1): alpha^2 + s(gam - mu) alpha - s gam = 0 (q-form root).
    const double b = s * (gam - mu);
    const double alpha = 2.0 * s * gam / (b + std::sqrt(b * b + 4.0 * s * gam));
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DivergenceError("run_original_nag: alpha left (0,1); check mu*s and gamma0", k);
    const double gam1 = (1.0 - alpha) * gam + mu * alpha;
    const Eigen::VectorXd y = (alpha * gam * z + gam1 * x) / (gam + mu * alpha);
    const Eigen::VectorXd g = obj.gradient(y);
    if (!g.allFinite()) {
      trace.meta["status"] = "diverged";
      throw DivergenceError("run_original_nag: non-finite gradient", k);
    }
    trace.rows.back().grad_norm = g.norm();
    x = y - s * g;
    z = ((1.0 - alpha) * gam * z + mu * alpha * y - alpha * g) / gam1;
    gam = gam1;
    alpha_prod *= 1.0 - alpha;
    const double fx = push(k + 1, x, z);
    if (fx > guard) {
      trace.meta["status"] = "diverged";
      throw DivergenceError("run_original_nag: divergence guard tripped", k);
    }
  }
  trace.rows.back().grad_norm = obj.gradient(x).norm();
  trace.meta["status"] = "ok";
  return trace;
}

double timestep_adaptive_next(double alpha_prev, double mu, double s) {
  const double m = mu * s;
  if (!(alpha_prev > std::sqrt(m)))
    throw std::domain_error("timestep_adaptive_next: requires alpha_prev > sqrt(mu s)");
  // alpha^2 + (a - m) alpha - a = 0 with a = alpha_prev^2; q-form of the
  // positive root avoids cancellation for small mu s.
  const double a = alpha_prev * alpha_prev;
  return 2.0 * a / ((a - m) + std::sqrt((a - m) * (a - m) + 4.0 * a));
}

double alpha_of_t(double t, double mu, double s) {
  if (!(t > 0.0)) throw std::domain_error("alpha_of_t: t must be positive");
  return 2.0 * std::sqrt(s) / t * cothc(0.5 * std::sqrt(mu) * t);
}

double t_of_alpha(double alpha, double mu, double s) {
  const double q = std::sqrt(mu * s);
  if (!(alpha > q)) throw std::domain_error("t_of_alpha: requires alpha > sqrt(mu s)");
  if (mu == 0.0) return 2.0 * std::sqrt(s) / alpha;
  // alpha(t) decreases from +inf to sqrt(mu s); bisect the bracketing
  // interval down to relative 1e-14.
  double lo = std::numeric_limits<double>::min();
  double hi = 2.0 * std::sqrt(s) / alpha;  // alpha(hi) >= alpha since cothc >= 1
  while (alpha_of_t(hi, mu, s) > alpha) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (alpha_of_t(mid, mu, s) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TwoSequence to_two_sequence(const std::vector<double>& tau, const std::vector<double>& delta,
                            double mu, double s) {
  if (tau.size() != delta.size())
    throw std::invalid_argument("to_two_sequence: sequence length mismatch");
  if (tau.size() < 2) throw std::invalid_argument("to_two_sequence: need at least two entries");
  TwoSequence out;
  out.beta.resize(tau.size() - 1);
  out.gamma.resize(tau.size() - 1);
  for (std::size_t k = 0; k + 1 < tau.size(); ++k) {
    if (!(tau[k] > 0.0)) throw std::invalid_argument("to_two_sequence: tau must be positive");
    out.beta[k] = (1.0 - tau[k]) * tau[k + 1] * (1.0 - mu * delta[k]) / tau[k];
    out.gamma[k] =
        tau[k + 1] * ((1.0 / s - mu) * delta[k] * tau[k] - 1.0 + mu * delta[k]) / tau[k];
  }
  return out;
}

bool TkConditionReport::all_ok(double tol) const {
  for (double r : residual2)
    if (r > tol) return false;
  for (double r : residual1)
    if (r > tol) return false;
  return true;
}

TkConditionReport check_tk_conditions(const std::vector<double>& t_seq, double mu, double s) {
  TkConditionReport rep;
  const double rmu = std::sqrt(mu);
  auto A = [&](double t) {
    const double sc = sinhc(0.5 * rmu * t);
    return 0.25 * t * t * sc * sc;
  };
  for (std::size_t k = 2; k < t_seq.size(); ++k) {
    const double r = 2.0 * std::sqrt(s) / t_seq[k] * cothc(0.5 * rmu * t_seq[k]) - 1.0;
    rep.residual2.push_back(r);
    rep.ok2.push_back(r <= 0.0);
  }
  for (std::size_t k = 0; k + 1 < t_seq.size(); ++k) {
    const double a = 2.0 * std::sqrt(s) / t_seq[k + 1] * cothc(0.5 * rmu * t_seq[k + 1]);
    const double Ak = A(t_seq[k]);
    // relative to A(t_k), the common scale of both sides
    const double r = ((1.0 - a) * A(t_seq[k + 1]) - Ak) / std::max(1.0, Ak);
    rep.residual1.push_back(r);
    rep.ok1.push_back(r <= 0.0);
  }
  return rep;
}

}  // namespace um
