#include "smalife/supervisor.hpp"

#include <algorithm>
#include <string>

#include "smalife/error.hpp"

namespace smalife {

double adjusted_setpoint(double t_set, double gamma, const DiscreteCoeffs& c) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw ConfigError("supervisor.gamma must lie in (0,1], got " + std::to_string(gamma));
  const double shrink = (1.0 - gamma) / gamma;
  return (1.0 / gamma - c.a1 * shrink) * t_set - c.a3 * shrink;
}

Supervisor::Supervisor(double t_set, double gamma, const DiscreteCoeffs& coeffs)
    : t_set_(t_set), gamma_(gamma), coeffs_(coeffs), t_set_adj_(adjusted_setpoint(t_set, gamma, coeffs)) {
  coeffs_.validate();
  if (!(t_set_ > coeffs_.ambient()))
    throw ConfigError("supervisor.t_set must exceed the model ambient " + std::to_string(coeffs_.ambient()));
}

double Supervisor::max_input(double temp) const {
  return (t_set_adj_ - coeffs_.a1 * temp - coeffs_.a3) / coeffs_.a2;
}

double Supervisor::saturate(double nominal, double temp) const {
  return std::clamp(std::min(nominal, gamma_ * max_input(temp)), 0.0, 1.0);
}

}  // namespace smalife
