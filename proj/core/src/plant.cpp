#include "smalife/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smalife/error.hpp"

namespace smalife {

void FatigueParams::validate() const {
  if (!(f0 > 0.0)) throw ConfigError("fatigue.f0 must be positive");
  if (!(w > 0.0)) throw ConfigError("fatigue.w must be positive");
  if (!(t_dmg < t_knee)) throw ConfigError("fatigue.t_dmg must be below fatigue.t_knee");
  if (!(d_min > 0.0 && d_min <= d_plateau && d_plateau <= 1.0))
    throw ConfigError("fatigue: require 0 < d_min <= d_plateau <= 1");
  if (!(kappa >= 0.0)) throw ConfigError("fatigue.kappa must be non-negative");
  if (!(eta > 0.0)) throw ConfigError("fatigue.eta must be positive");
}

void NoiseParams::validate() const {
  if (!(sigma_t >= 0.0) || !(sigma_f >= 0.0)) throw ConfigError("noise sigmas must be non-negative");
}

double phase_fraction(double temp, const FatigueParams& fp) {
  return 1.0 / (1.0 + std::exp(-(temp - fp.t_act) / fp.w));
}

double degradation_floor(double temp, const FatigueParams& fp) {
  if (temp <= fp.t_dmg) return 1.0;
  if (temp <= fp.t_knee) return fp.d_plateau;
  return std::max(fp.d_plateau - fp.kappa * (temp - fp.t_knee), fp.d_min);
}

PlantState degrade_step(const PlantState& s, const FatigueParams& fp, double dt) {
  const double floor = degradation_floor(s.temp, fp);
  const double drive = std::max(s.temp - fp.t_dmg, 0.0);
  const double gap = std::max(s.d - floor, 0.0);
  if (drive == 0.0 || gap == 0.0) return s;

  PlantState next = s;
  // An explicit step longer than the relaxation time would overshoot the floor.
  const double lower = std::max(floor, fp.d_min);
  next.d = std::clamp(s.d - dt * fp.eta * drive * gap, std::min(lower, s.d), s.d);
  return next;
}

double blocked_force(const PlantState& s, const FatigueParams& fp) {
  return fp.f0 * phase_fraction(s.temp, fp) * s.d;
}

MeasurementNoise::MeasurementNoise(const NoiseParams& np) : params_(np), rng_(np.seed) {
  params_.validate();
}

double MeasurementNoise::temperature(double true_temp) {
  const double z = unit_(rng_);
  return true_temp + params_.sigma_t * z;
}

double MeasurementNoise::force(double true_force) {
  const double z = unit_(rng_);
  return true_force + params_.sigma_f * z;
}

PlantReading plant_read(const PlantState& s, const FatigueParams& fp, MeasurementNoise& noise) {
  PlantReading r;
  r.state = s;
  r.force_true = blocked_force(s, fp);
  r.temp_meas = noise.temperature(s.temp);
  r.force_meas = noise.force(r.force_true);
  return r;
}

PlantReading plant_step(const PlantState& s, double duty, const DiscreteCoeffs& coeffs,
                        const FatigueParams& fp, MeasurementNoise& noise, double dt) {
  PlantState next = s;
  next.temp = step_temperature(coeffs, s.temp, duty);
  next = degrade_step(next, fp, dt);
  next.elapsed = s.elapsed + dt;
  return plant_read(next, fp, noise);
}

}  // namespace smalife
