#include "smalife/thermal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smalife/error.hpp"

namespace smalife {

void ThermalParams::validate() const {
  if (!(alpha1 < 0.0)) throw ConfigError("thermal.alpha1 must be negative, got " + std::to_string(alpha1));
  if (!(alpha2 > 0.0)) throw ConfigError("thermal.alpha2 must be positive, got " + std::to_string(alpha2));
  if (!(dt > 0.0)) throw ConfigError("thermal.dt must be positive, got " + std::to_string(dt));
  if (!(std::abs(alpha1) * dt < 1.0))
    throw ConfigError("thermal: |alpha1|*dt must be < 1 for a stable discretization");
  if (!std::isfinite(t_amb)) throw ConfigError("thermal.t_amb must be finite");
}

void DiscreteCoeffs::validate() const {
  if (!(a1 > 0.0 && a1 < 1.0)) throw ConfigError("coeffs.a1 must lie in (0,1), got " + std::to_string(a1));
  if (!(a2 > 0.0)) throw ConfigError("coeffs.a2 must be positive, got " + std::to_string(a2));
  if (!std::isfinite(a3)) throw ConfigError("coeffs.a3 must be finite");
}

DiscreteCoeffs discretize(const ThermalParams& p) {
  p.validate();
  return DiscreteCoeffs{
      .a1 = 1.0 + p.alpha1 * p.dt,
      .a2 = p.alpha2 * p.dt,
      .a3 = -p.alpha1 * p.t_amb * p.dt,
  };
}

double equilibrium_temperature(const ThermalParams& p, double duty) {
  return p.t_amb - p.alpha2 * duty / p.alpha1;
}

double holding_duty(const ThermalParams& p, double temp) {
  return -p.alpha1 * (temp - p.t_amb) / p.alpha2;
}

double analytic_response(const ThermalParams& p, double t0, double duty, double t) {
  const double t_eq = equilibrium_temperature(p, duty);
  return t_eq + (t0 - t_eq) * std::exp(p.alpha1 * t);
}

double time_to_reach(const ThermalParams& p, double t0, double duty, double target) {
  const double t_eq = equilibrium_temperature(p, duty);
  const double ratio = (target - t_eq) / (t0 - t_eq);
  if (!(ratio > 0.0) || ratio > 1.0) return std::numeric_limits<double>::infinity();
  return std::log(ratio) / p.alpha1;
}

}  // namespace smalife
