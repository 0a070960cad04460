#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "um/errors.hpp"
#include "um/hyperbolic.hpp"
#include "um/sinh_p.hpp"

using namespace um;

TEST_CASE("sinhc basics") {
  CHECK(sinhc(0.0) == 1.0);
  // reference sinh evaluation
  CHECK(sinhc(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(sinhc(1.0) == doctest::Approx(1.1752011936438014).epsilon(1e-12));
  CHECK(std::isnan(sinhc(0.5)) == false);
  CHECK_THROWS_AS(sinhc(std::nan("")), std::invalid_argument);
}

TEST_CASE("cothc large-argument behaviour") {
  // x coth(x), evaluated against an extended-precision expansion:
  // 10*coth(10) = 10*(1+2e^-20/(1-e^-20)).
  const long double ref = 10.0L * (1.0L + 2.0L * std::exp(-20.0L) / (1.0L - std::exp(-20.0L)));
  CHECK(cothc(10.0) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  CHECK(cothc(10.0) == doctest::Approx(10.00000004122).epsilon(1e-12));
  CHECK(cothc(400.0) == 400.0);  // saturated branch
  CHECK(std::isfinite(cschc(500.0)));
  CHECK(cschc(500.0) == doctest::Approx(1000.0 * std::exp(-500.0)).epsilon(1e-12));
}

TEST_CASE("series branch has no cancellation at tiny arguments") {
  for (double f : {1e-12, 1e-9, 1e-6}) {
    CHECK(std::fabs(sinhc(f) - 1.0) < 1e-10);
    CHECK(std::fabs(tanhc(f) - 1.0) < 1e-10);
    CHECK(std::fabs(cothc(f) - 1.0) < 1e-10);
    CHECK(std::fabs(cschc(f) - 1.0) < 1e-10);
  }
}

TEST_CASE("series and direct branches agree at the cut") {
  for (double x : {0.9e-4, 1.1e-4, 1e-3, 1e-2}) {
    CHECK(sinhc(x) == doctest::Approx(std::sinh(x) / x).epsilon(1e-13));
    CHECK(tanhc(x) == doctest::Approx(std::tanh(x) / x).epsilon(1e-13));
    CHECK(cothc(x) == doctest::Approx(x / std::tanh(x)).epsilon(1e-13));
    CHECK(cschc(x) == doctest::Approx(x / std::sinh(x)).epsilon(1e-13));
  }
}

TEST_CASE("hyperbolic identity tanh - coth + sech*csch = 0") {
  // Scaled by the dominant term since coth ~ 1/x swamps absolute
  // precision at small x.
  for (double x = 1e-8; x <= 20.0; x *= 1.7) {
    const double lhs = std::tanh(x) - cothc(x) / x + 1.0 / (std::cosh(x) * std::sinh(x));
    CHECK(std::fabs(lhs) <= 1e-12 * std::max(1.0, cothc(x) / x));
  }
}

TEST_CASE("sinh_p table: p = 2 reduces to classical sinh/cosh") {
  HigherHyperbolicTable tab(2);
  tab.extend(10.0);
  for (double t = 0.0; t <= 10.0; t += 0.01) {
    const auto [s, c] = tab.eval(t);
    CHECK(std::fabs(s - std::sinh(t)) <= 1e-9 * std::max(1.0, std::sinh(t)));
    CHECK(std::fabs(c - std::cosh(t)) <= 1e-9 * std::max(1.0, std::cosh(t)));
  }
}

TEST_CASE("sinh_p initial condition and invariants") {
  for (int p : {2, 3, 4}) {
    HigherHyperbolicTable tab(p);
    const auto [s0, c0] = tab.eval_extending(0.0);
    CHECK(s0 == 0.0);
    CHECK(c0 == 1.0);
    // cosh_p == (1 + sinh_p^p)^(1/p) at nodes, and samples increase
    double prev = -1.0;
    for (double t = 0.0; t <= 5.0; t += 0.25) {
      const auto [s, c] = tab.eval_extending(t);
      CHECK(s > prev);
      prev = s;
      CHECK(c == doctest::Approx(std::pow(1.0 + std::pow(s, p), 1.0 / p)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(HigherHyperbolicTable(1), std::invalid_argument);
}

TEST_CASE("sinh_3 against a fine-step reference integration") {
  // Independent oracle: classical RK4 at step 1e-6 (vs the table's 1e-4).
  const int p = 3;
  auto coshp = [&](double s) { return std::pow(1.0 + s * s * s, 1.0 / 3.0); };
  double s = 0.0;
  const double h = 1e-6;
  for (long i = 0; i < 1000000; ++i) {
    const double k1 = coshp(s);
    const double k2 = coshp(s + 0.5 * h * k1);
    const double k3 = coshp(s + 0.5 * h * k2);
    const double k4 = coshp(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
  }
  HigherHyperbolicTable tab(p);
  const auto [sv, cv] = tab.eval_extending(1.0);
  CHECK(sv == doctest::Approx(s).epsilon(1e-10));
  CHECK(cv == doctest::Approx(coshp(s)).epsilon(1e-10));
}

TEST_CASE("higher variants") {
  HigherHyperbolicTable tab(3);
  const auto v0 = tab.variants(0.0);
  CHECK(v0.sinhc_p == 1.0);
  CHECK(v0.tanhc_p == 1.0);
  CHECK(std::isinf(v0.coth_p));

  // tanhc_2(2) = tanh(2)/2
  HigherHyperbolicTable tab2(2);
  const auto v2 = tab2.variants(2.0);
  CHECK(v2.tanhc_p == doctest::Approx(std::tanh(2.0) / 2.0).epsilon(1e-9));
  CHECK(v2.tanhc_p == doctest::Approx(0.4820).epsilon(1e-4));

  // cothc_p ~ 1 near zero, from above
  const auto vs = tab.variants(1e-6);
  CHECK(vs.cothc_p >= 1.0);
  CHECK(vs.cothc_p <= 1.0 + 1e-6);
}

TEST_CASE("sinhc_p nondecreasing and cschc^2 decreasing") {
  for (int p : {2, 3, 4}) {
    HigherHyperbolicTable tab(p);
    tab.extend(20.0);
    double prev = 0.0;
    for (double t = 1e-2; t <= 20.0; t += 1e-2) {
      const double v = tab.eval(t).first / t;
      CHECK(v >= prev - 1e-13);
      prev = v;
    }
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double t = 1e-2; t <= 20.0; t += 1e-2) {
    const double c = cschc(t);
    CHECK(c * c < prev);
    prev = c * c;
  }
}

TEST_CASE("C_p estimates") {
  HigherHyperbolicTable tab2(2);
  const CpEstimate c2 = tab2.estimate_Cp();
  CHECK(std::fabs(c2.value - 0.5) <= 1e-4);

  HigherHyperbolicTable tab3(3);
  // monotone approach (App. B.1): log sinh_p(T+t) - t increases
  CHECK(tab3.cp_ratio(20.0) >= tab3.cp_ratio(10.0) - 1e-6);
  const CpEstimate c3 = tab3.estimate_Cp();

  // independent fine-step oracle for the p=3 plateau value
  auto coshp = [&](double s) { return std::pow(1.0 + s * s * s, 1.0 / 3.0); };
  double s = 0.0;
  const double h = 1e-4;  // fine enough: RK4 local error ~ 1e-20 relative
  const double T = c3.t_reached;
  const long steps = static_cast<long>(T / h);
  for (long i = 0; i < steps; ++i) {
    const double k1 = coshp(s);
    const double k2 = coshp(s + 0.5 * h * k1);
    const double k3 = coshp(s + 0.5 * h * k2);
    const double k4 = coshp(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
  }
  CHECK(c3.value == doctest::Approx(s * std::exp(-T)).epsilon(1e-4));

  // horizon too short to reach the plateau -> error carrying best value
  HigherHyperbolicTable tab4(4);
  CHECK_THROWS_AS(tab4.estimate_Cp(3.0), ToleranceNotReachedError);
  try {
    tab4.estimate_Cp(3.0);
  } catch (const ToleranceNotReachedError& e) {
    CHECK(e.best_estimate() > 0.0);
  }
}
