#pragma once

#include "smalife/thermal.hpp"

namespace smalife {

/// One-step predictive temperature ceiling. The nominal duty is capped at a
/// discounted prediction of the largest input that keeps the next sample at
/// the limit; the setpoint is shifted so the discounted loop still settles on
/// `t_set()` exactly.
class Supervisor {
 public:
  /// Throws ConfigError for gamma outside (0,1] or a limit at/below the
  /// model's ambient fixed point.
  Supervisor(double t_set, double gamma, const DiscreteCoeffs& coeffs);

  double t_set() const { return t_set_; }
  double gamma() const { return gamma_; }
  double t_set_adjusted() const { return t_set_adj_; }
  const DiscreteCoeffs& coeffs() const { return coeffs_; }

  /// Undiscounted maximal input (1/a2)(T_set' - a1*T - a3). Unclamped; negative
  /// once `temp` is above the limit.
  double max_input(double temp) const;

  /// clamp(min(nominal, gamma*max_input(temp)), 0, 1).
  double saturate(double nominal, double temp) const;

 private:
  double t_set_;
  double gamma_;
  DiscreteCoeffs coeffs_;
  double t_set_adj_;
};

/// (1/gamma - a1(1-gamma)/gamma) * t_set - a3(1-gamma)/gamma
double adjusted_setpoint(double t_set, double gamma, const DiscreteCoeffs& c);

}  // namespace smalife
