#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "smalife/error.hpp"
#include "smalife/thermal.hpp"
#include "test_support.hpp"

using namespace smalife;

TEST_CASE("discretize maps the reference parameters to forward-Euler coefficients") {
  const DiscreteCoeffs c = discretize(ThermalParams{});
  CHECK(c.a1 == doctest::Approx(0.9842).epsilon(1e-12));
  CHECK(c.a2 == doctest::Approx(5.844).epsilon(1e-12));
  CHECK(c.a3 == doctest::Approx(0.079 * 35.16 * 0.2).epsilon(1e-12));
  CHECK(c.ambient() == doctest::Approx(35.16).epsilon(1e-12));
}

TEST_CASE("ambient is a fixed point of the zero-input step") {
  const ThermalParams p;
  const DiscreteCoeffs c = discretize(p);
  CHECK(std::abs(step_temperature(c, p.t_amb, 0.0) - p.t_amb) < 1e-9);
}

TEST_CASE("one step at half duty from ambient") {
  const ThermalParams p;
  CHECK(step_temperature(discretize(p), p.t_amb, 0.5) == doctest::Approx(38.082).epsilon(1e-6));
}

TEST_CASE("analytic response examples") {
  const ThermalParams p;
  CHECK(analytic_response(p, 35.16, 0.0, 17.0) == doctest::Approx(35.16));
  // Closed form: 35.16 + 29.22 * 0.5 / 0.079. The rounded worked value 220.06 agrees to 2e-4.
  CHECK(analytic_response(p, 35.16, 0.5, 1e6) == doctest::Approx(220.0968).epsilon(1e-6));
  CHECK(equilibrium_temperature(p, 0.5) == doctest::Approx(220.06).epsilon(2e-4));
  CHECK(analytic_response(p, 35.16, 0.5, 9.38) == doctest::Approx(132.0).epsilon(2e-3));
}

TEST_CASE("time_to_reach inverts the analytic response") {
  const ThermalParams p;
  const double t = time_to_reach(p, 35.16, 0.5, 132.0);
  CHECK(t == doctest::Approx(9.38).epsilon(2e-3));
  CHECK(analytic_response(p, 35.16, 0.5, t) == doctest::Approx(132.0).epsilon(1e-12));
  CHECK(std::isinf(time_to_reach(p, 35.16, 0.5, 230.0)));
  CHECK(time_to_reach(p, 35.16, 0.5, 35.16) == 0.0);
}

TEST_CASE("holding duty matches the steady-state balance") {
  const ThermalParams p;
  CHECK(holding_duty(p, 140.0) == doctest::Approx(0.28345).epsilon(1e-4));
  CHECK(equilibrium_temperature(p, holding_duty(p, 140.0)) == doctest::Approx(140.0).epsilon(1e-12));
}

namespace {
double discretization_error(ThermalParams p, double dt) {
  p.dt = dt;
  const DiscreteCoeffs c = discretize(p);
  const int steps = static_cast<int>(std::lround(120.0 / dt));
  double t = p.t_amb, worst = 0.0;
  for (int k = 1; k <= steps; ++k) {
    t = step_temperature(c, t, 0.5);
    worst = std::max(worst, std::abs(t - analytic_response(p, p.t_amb, 0.5, k * dt)));
  }
  return worst;
}
}  // namespace

TEST_CASE("discrete trajectory tracks the continuous solution over 120 s") {
  const ThermalParams p;
  const double e = discretization_error(p, 0.2);
  // Forward Euler at dt = 0.2 peaks at 0.541 degC for these parameters.
  CHECK(e < 0.55);
  CHECK(discretization_error(p, 0.1) < 0.28);
  // First-order convergence: halving dt halves the error.
  CHECK(e / discretization_error(p, 0.1) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("step is strictly increasing in temperature and duty") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const DiscreteCoeffs c = discretize(test::random_params(rng));
    std::uniform_real_distribution<double> t(0.0, 300.0), u(0.0, 1.0);
    const double t0 = t(rng), u0 = u(rng);
    CHECK(step_temperature(c, t0 + 0.1, u0) > step_temperature(c, t0, u0));
    CHECK(step_temperature(c, t0, u0 + 0.01) > step_temperature(c, t0, u0));
  }
}

TEST_CASE("parameter validation") {
  ThermalParams p;
  p.alpha1 = 0.01;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ThermalParams{};
  p.alpha2 = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ThermalParams{};
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ThermalParams{};
  p.alpha1 = -6.0;  // |alpha1|*dt >= 1
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_NOTHROW(ThermalParams{}.validate());
}
