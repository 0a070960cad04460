#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "um/errors.hpp"
#include "um/flows.hpp"
#include "um/hyperbolic.hpp"
#include "um/problems.hpp"

using namespace um;
using Eigen::VectorXd;

namespace {

Objective half_square() {
  Objective obj;
  obj.id = "half_square";
  obj.n = 1;
  obj.L = obj.mu = 1.0;
  obj.value = [](const VectorXd& x) { return 0.5 * x[0] * x[0]; };
  obj.gradient = [](const VectorXd& x) { return VectorXd(x); };
  obj.minimizer = VectorXd::Zero(1);
  obj.min_value = 0.0;
  return obj;
}

Objective toy() { return make_toy_quadratic(1e-3); }

VectorXd toy_x0() {
  VectorXd x(2);
  x << 1.0, 1.0;
  return x;
}

double max_energy_increase(const Trajectory& tr) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < tr.nodes.size(); ++i)
    worst = std::max(worst, tr.nodes[i].energy - tr.nodes[i - 1].energy);
  return worst;
}

}  // namespace

TEST_CASE("NAG-SC system with mu = 0 on x^2/2 is cos(t)") {
  const Objective obj = half_square();
  const Trajectory tr =
      integrate_flow(FlowSpec::nag_sc(0.0), obj, VectorXd::Ones(1), 10.0, 1e-3);
  double worst = 0.0;
  for (const TrajNode& nd : tr.nodes)
    worst = std::max(worst, std::fabs(nd.x[0] - std::cos(nd.t)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("zero gradient keeps every flow stationary") {
  Objective flat;
  flat.id = "flat";
  flat.n = 2;
  flat.value = [](const VectorXd&) { return 3.0; };
  flat.gradient = [](const VectorXd& x) { return VectorXd(VectorXd::Zero(x.size())); };
  const VectorXd x0 = VectorXd::Ones(2);
  for (const FlowSpec& spec :
       {FlowSpec::nag_c(), FlowSpec::unified_nag(0.01), FlowSpec::nag_sc(0.01),
        FlowSpec::tensor_flow(3, 0.1, 0.01), FlowSpec::original_nag_flow(0.01, 1.0)}) {
    const Trajectory tr = integrate_flow(spec, flat, x0, 5.0, 1e-2);
    for (const TrajNode& nd : tr.nodes) {
      CHECK((nd.x - x0).lpNorm<Eigen::Infinity>() <= 1e-13);
    }
  }
}

TEST_CASE("series start is insensitive to halving the offset") {
  // Richardson-style consistency: integrating from eps vs eps/2 moves
  // X(1) by O(eps^3) at most.
  const Objective obj = toy();
  const Trajectory a = integrate_flow(FlowSpec::unified_nag(obj.mu), obj, toy_x0(), 1.0, 1e-3);
  const Trajectory b = integrate_flow(FlowSpec::unified_nag(obj.mu), obj, toy_x0(), 1.0, 5e-4);
  CHECK((a.nodes.back().x - b.nodes.back().x).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("step-halving shows at least 8x convergence (4th order + series floor)") {
  // Coarse steps so truncation dominates rounding noise.
  const Objective obj = make_toy_quadratic(0.01);  // stiffest toy instance
  auto run = [&](const FlowSpec& spec, double dt) {
    return integrate_flow(spec, obj, toy_x0(), 4.0, dt);
  };
  const FlowSpec uni = FlowSpec::unified_nag(obj.mu);
  const Trajectory t1 = run(uni, 0.04), t2 = run(uni, 0.02), t3 = run(uni, 0.01);
  const double d12 = (t1.nodes.back().x - t2.nodes.back().x).norm();
  const double d23 = (t2.nodes.back().x - t3.nodes.back().x).norm();
  CHECK(d12 / d23 >= 8.0);

  // regular-start flow shows clean 4th order
  const FlowSpec sc = FlowSpec::nag_sc(obj.mu);
  const Trajectory s1 = run(sc, 0.04), s2 = run(sc, 0.02), s3 = run(sc, 0.01);
  const double e12 = (s1.nodes.back().x - s2.nodes.back().x).norm();
  const double e23 = (s2.nodes.back().x - s3.nodes.back().x).norm();
  CHECK(e12 / e23 >= 8.0);
}

TEST_CASE("continuous Lyapunov energies are nonincreasing (catalog flows)") {
  const Objective logi = make_logistic(synth_logistic(100, 20, 5e-2, 42));
  const VectorXd z20 = VectorXd::Zero(20);

  struct Case {
    FlowSpec spec;
    const Objective* obj;
    VectorXd x0;
    double horizon, dt, slack;
  };
  const Objective toy_obj = toy();
  const Objective toy0 = make_toy_quadratic(0.0);
  // flow mu must not exceed the objective's strong convexity; toy(0.1)
  // caps at min(0.1, 0.01) = 0.01
  const Objective toy_big = make_toy_quadratic(0.1);
  std::vector<Case> cases;
  cases.push_back({FlowSpec::nag_c(), &toy0, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::unified_nag(0.0), &toy0, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::unified_nag(1e-3), &toy_obj, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::unified_nag(toy_big.mu), &toy_big, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::nag_sc(1e-3), &toy_obj, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::nag_sc(toy_big.mu), &toy_big, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::tensor_flow(2, 0.25, 1e-3), &toy_obj, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::tensor_flow(3, 0.05, 0.0), &toy_obj, toy_x0(), 10.0, 1e-3, 1e-8});
  cases.push_back(
      {FlowSpec::lagrangian_from_original(1e-3, 1.0), &toy_obj, toy_x0(), 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::unified_nag(logi.mu), &logi, z20, 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::unified_nag(0.0), &logi, z20, 20.0, 1e-3, 1e-8});
  cases.push_back({FlowSpec::nag_sc(logi.mu), &logi, z20, 20.0, 1e-3, 1e-8});

  for (const Case& c : cases) {
    const Trajectory tr = integrate_flow(c.spec, *c.obj, c.x0, c.horizon, c.dt);
    INFO(flow_name(c.spec.id), " mu=", c.spec.mu, " on ", c.obj->id);
    CHECK(max_energy_increase(tr) <= c.slack);
    // guarantee along the trajectory where a catalog bound exists
    for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
      if (std::isnan(tr.nodes[i].bound)) continue;
      CHECK(tr.gap(i) <= tr.nodes[i].bound + 1e-12);
    }
  }
}

TEST_CASE("unified NAG energy at t = 0 state") {
  const Objective obj = half_square();
  TrajNode nd;
  nd.t = 0.0;
  nd.x = VectorXd::Ones(1);
  nd.z = VectorXd::Ones(1);
  nd.f_raw = 0.5;
  CHECK(energy_continuous(FlowSpec::unified_nag(0.3), nd, obj) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("original-NAG flow has no catalog energy") {
  const Objective obj = half_square();
  TrajNode nd;
  nd.t = 1.0;
  nd.x = nd.z = VectorXd::Ones(1);
  nd.f_raw = 0.5;
  CHECK_THROWS_AS(energy_continuous(FlowSpec::original_nag_flow(0.1, 1.0), nd, obj),
                  UnsupportedDiagnosticError);
}

TEST_CASE("damping coefficient approaches 2 sqrt(mu)") {
  for (double mu : {0.3, 1.0, 5.0}) {
    const FlowSpec spec = FlowSpec::unified_nag(mu);
    const double t = 100.0 / std::sqrt(mu);
    const double b = 0.5 * std::sqrt(mu) * std::tanh(0.5 * std::sqrt(mu) * t) +
                     3.0 / t * cothc(0.5 * std::sqrt(mu) * t);
    CHECK(std::fabs(b - 2.0 * std::sqrt(mu)) <= 1e-3);
    (void)spec;
  }
}

TEST_CASE("mu -> 0 continuity of the unified trajectory") {
  const Objective obj = make_toy_quadratic(0.0);
  const Trajectory a = integrate_flow(FlowSpec::unified_nag(1e-10), obj, toy_x0(), 20.0, 1e-3);
  const Trajectory b = integrate_flow(FlowSpec::nag_c(), obj, toy_x0(), 20.0, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    worst = std::max(worst, (a.nodes[i].x - b.nodes[i].x).lpNorm<Eigen::Infinity>());
  CHECK(worst <= 1e-4);
}

TEST_CASE("original-NAG flow equals the Lagrangian entry of Appendix A.1") {
  const Objective obj = toy();
  for (double gamma0 : {0.5, 2.0}) {
    const Trajectory a =
        integrate_flow(FlowSpec::original_nag_flow(obj.mu, gamma0), obj, toy_x0(), 20.0, 1e-3);
    const Trajectory b = integrate_flow(FlowSpec::lagrangian_from_original(obj.mu, gamma0), obj,
                                        toy_x0(), 20.0, 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
      worst = std::max(worst, (a.nodes[i].x - b.nodes[i].x).lpNorm<Eigen::Infinity>());
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("time dilation: identity, unified-to-tensor, linear speedup") {
  const Objective obj = toy();

  const double id_dev = verify_time_dilation(
      TimeDilation::identity(FlowSpec::unified_nag(obj.mu)), obj, toy_x0(), 0.5, 8.0, 1e-3);
  CHECK(id_dev <= 1e-8);

  // tensor flow with p = 2, C = 1/4 IS the unified NAG system (T = id);
  // C = 1 exercises a genuine dilation T(t) = 2t.
  const double dev1 = verify_time_dilation(TimeDilation::unified_to_tensor(obj.mu, 2, 0.25), obj,
                                           toy_x0(), 0.5, 8.0, 1e-3);
  CHECK(dev1 <= 1e-5);
  const double dev2 = verify_time_dilation(TimeDilation::unified_to_tensor(obj.mu, 2, 1.0), obj,
                                           toy_x0(), 0.5, 8.0, 1e-3);
  CHECK(dev2 <= 1e-5);

  // linear speedup of the mu = 0 Lagrangian entry (alpha, beta) of NAG-C:
  // e^alpha = 2/t, e^beta = t^2/4 — singular at 0, so shift the entry.
  auto aexp = [](double t) { return 2.0 / (t + 1.0); };
  auto bexp = [](double t) { return 0.25 * (t + 1.0) * (t + 1.0); };
  auto bdot = [](double t) { return 2.0 / (t + 1.0); };
  const double dev3 = verify_time_dilation(TimeDilation::linear_speedup(0.0, 2.0, aexp, bexp, bdot),
                                           obj, toy_x0(), 0.0, 8.0, 1e-3);
  CHECK(dev3 <= 1e-5);
}

TEST_CASE("ode_residual: known solution, constant trajectory, unified flow") {
  const Objective obj = half_square();
  const Trajectory sc =
      integrate_flow(FlowSpec::nag_sc(0.0), obj, VectorXd::Ones(1), 10.0, 1e-3);
  CHECK(ode_residual(FlowSpec::nag_sc(0.0), sc, obj) <= 1e-4);

  Objective flat;
  flat.id = "flat";
  flat.n = 1;
  flat.value = [](const VectorXd&) { return 0.0; };
  flat.gradient = [](const VectorXd& x) { return VectorXd(VectorXd::Zero(x.size())); };
  const Trajectory ft = integrate_flow(FlowSpec::nag_sc(0.5), flat, VectorXd::Ones(1), 5.0, 1e-3);
  CHECK(ode_residual(FlowSpec::nag_sc(0.5), ft, flat) == 0.0);

  const Objective t = toy();
  const Trajectory ut = integrate_flow(FlowSpec::unified_nag(t.mu), t, toy_x0(), 10.0, 1e-3);
  CHECK(ode_residual(FlowSpec::unified_nag(t.mu), ut, t) <= 1e-4);
}

TEST_CASE("NAG-G: stationary objective, bound, posterior energy") {
  Objective flat;
  flat.id = "flat";
  flat.n = 2;
  flat.value = [](const VectorXd&) { return 0.0; };
  flat.gradient = [](const VectorXd& x) { return VectorXd(VectorXd::Zero(x.size())); };
  const NagGResult fr = integrate_nag_g(flat, VectorXd::Ones(2), 0.1, 5.0, 1e-3);
  CHECK((fr.x_T - VectorXd::Ones(2)).norm() == 0.0);

  const Objective logi = make_logistic(synth_logistic(100, 20, 5e-2, 42));
  const Objective toy_obj = toy();
  for (const Objective* obj : {&toy_obj, &logi}) {
    for (double T : {5.0, 20.0}) {
      const VectorXd x0 = obj->n == 2 ? toy_x0() : VectorXd(VectorXd::Zero(20));
      const NagGResult r = integrate_nag_g(*obj, x0, obj->mu, T, 1e-3);
      CHECK(r.grad_norm_sq_T <= nag_g_bound(x0, r.x_T, obj->mu, T, *obj));
      // posterior energy nonincreasing on [0, T - eps_end]
      double prev = std::numeric_limits<double>::infinity();
      for (const TrajNode& nd : r.trajectory.nodes) {
        const double e = energy_nag_g(nd, r.x_T, obj->mu, T, *obj);
        if (prev != std::numeric_limits<double>::infinity()) CHECK(e <= prev + 1e-7);
        prev = e;
      }
    }
  }
}

TEST_CASE("divergence during integration raises") {
  Objective bad;
  bad.id = "explode";
  bad.n = 1;
  bad.value = [](const VectorXd& x) { return -x[0] * x[0] * x[0] * x[0]; };
  bad.gradient = [](const VectorXd& x) {
    return VectorXd(-4.0 * x.array().pow(3).matrix());
  };
  CHECK_THROWS_AS(integrate_flow(FlowSpec::nag_sc(0.0), bad, VectorXd::Ones(1), 50.0, 1e-2),
                  DivergenceError);
}
