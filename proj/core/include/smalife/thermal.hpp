#pragma once

namespace smalife {

/// Continuous first-order electrothermal model
///   dT/dt = alpha1 * (T - t_amb) + alpha2 * u
/// sampled at the control period dt.
struct ThermalParams {
  double alpha1 = -0.079;  // 1/s, cooling
  double alpha2 = 29.22;   // degC/s per unit duty
  double t_amb = 35.16;    // degC
  double dt = 0.2;         // s

  /// Throws ConfigError unless alpha1 < 0, alpha2 > 0, dt > 0 and |alpha1|*dt < 1.
  void validate() const;
};

/// Affine one-step map T[k+1] = a1*T[k] + a2*u[k] + a3.
struct DiscreteCoeffs {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  /// Zero-input fixed point a3 / (1 - a1).
  double ambient() const { return a3 / (1.0 - a1); }

  void validate() const;
};

/// Forward-Euler discretization: a1 = 1 + alpha1*dt, a2 = alpha2*dt,
/// a3 = -alpha1*t_amb*dt.
DiscreteCoeffs discretize(const ThermalParams& p);

inline double step_temperature(const DiscreteCoeffs& c, double temp, double duty) {
  return c.a1 * temp + c.a2 * duty + c.a3;
}

/// Exact solution of the continuous model for a constant duty held for `t` seconds.
double analytic_response(const ThermalParams& p, double t0, double duty, double t);

/// Temperature the continuous model settles at under a constant duty.
double equilibrium_temperature(const ThermalParams& p, double duty);

/// Duty that holds the continuous model at `temp`: -alpha1*(temp - t_amb)/alpha2.
double holding_duty(const ThermalParams& p, double temp);

/// Time for the continuous model to move from t0 to `target` under a constant
/// duty. Returns +inf when the target lies beyond the equilibrium.
double time_to_reach(const ThermalParams& p, double t0, double duty, double target);

}  // namespace smalife
