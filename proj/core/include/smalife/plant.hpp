#pragma once

#include <cstdint>
#include <random>

#include "smalife/thermal.hpp"

namespace smalife {

/// Synthetic functional-fatigue law. Force is f0 * phase_fraction(T) * d, and
/// the degradation fraction d relaxes toward a temperature-dependent floor
/// whenever the wire sits above t_dmg.
struct FatigueParams {
  double f0 = 2.2;          // N, fresh peak blocked force
  double t_act = 90.0;      // degC, logistic activation centre
  double w = 8.0;           // degC, logistic width
  double t_dmg = 100.0;     // degC, damage onset
  double t_knee = 175.0;    // degC, end of the plateau
  double d_plateau = 0.70;  // floor between t_dmg and t_knee
  double kappa = 0.006;     // 1/degC, floor slope above the knee
  double d_min = 0.30;      // absolute floor
  double eta = 5e-5;        // 1/(degC*s), relaxation rate

  void validate() const;
};

struct NoiseParams {
  double sigma_t = 0.5;    // degC
  double sigma_f = 0.02;   // N
  std::uint64_t seed = 1;

  void validate() const;
};

struct PlantState {
  double temp = 0.0;     // degC, true wire temperature
  double d = 1.0;        // degradation fraction in [d_min, 1]
  double elapsed = 0.0;  // s

  static PlantState fresh(double ambient) { return PlantState{ambient, 1.0, 0.0}; }
};

double phase_fraction(double temp, const FatigueParams& fp);
double degradation_floor(double temp, const FatigueParams& fp);

/// One explicit step of d' = d - dt*eta*max(T - t_dmg, 0)*max(d - floor(T), 0),
/// clamped to [max(d_min, floor), d]. Temperature and elapsed time are untouched.
PlantState degrade_step(const PlantState& s, const FatigueParams& fp, double dt);

double blocked_force(const PlantState& s, const FatigueParams& fp);

/// Seeded Gaussian measurement channel. Each measurement draws one temperature
/// sample then one force sample, so a trial's noise is fixed by the seed and
/// the number of steps.
class MeasurementNoise {
 public:
  explicit MeasurementNoise(const NoiseParams& np);

  double temperature(double true_temp);
  double force(double true_force);

 private:
  NoiseParams params_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

struct PlantReading {
  PlantState state;
  double temp_meas = 0.0;
  double force_meas = 0.0;
  double force_true = 0.0;
};

/// Thermal step, then fatigue step at the new temperature, then noisy readout
/// of the new state.
PlantReading plant_step(const PlantState& s, double duty, const DiscreteCoeffs& coeffs,
                        const FatigueParams& fp, MeasurementNoise& noise, double dt);

/// Readout of a state without advancing it (used for the t = 0 sample).
PlantReading plant_read(const PlantState& s, const FatigueParams& fp, MeasurementNoise& noise);

}  // namespace smalife
