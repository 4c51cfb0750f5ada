#include "smalife/sysid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "smalife/error.hpp"

namespace smalife {

void ExcitationConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("excitation.dt must be positive");
  if (!(segment_s > 0.0)) throw ConfigError("excitation.segment_s must be positive");
  if (!(duration >= 10.0 * segment_s)) throw ConfigError("excitation.duration must be at least 10 segments");
  const double steps = segment_s / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ConfigError("excitation.dt must divide excitation.segment_s");
  if (!(0.0 <= duty_lo && duty_lo <= duty_hi && duty_hi <= 1.0))
    throw ConfigError("excitation duty range must satisfy 0 <= lo <= hi <= 1");
}

std::vector<double> excite(const ExcitationConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const auto per_segment = static_cast<std::size_t>(std::llround(cfg.segment_s / cfg.dt));

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> draw(cfg.duty_lo, cfg.duty_hi);
  std::vector<double> duty(n);
  double level = cfg.duty_lo;
  for (std::size_t k = 0; k < n; ++k) {
    if (k % per_segment == 0) level = cfg.duty_lo == cfg.duty_hi ? cfg.duty_lo : draw(rng);
    duty[k] = level;
  }
  return duty;
}

std::vector<double> simulate_response(const ThermalParams& p, std::span<const double> duty, double t0,
                                      double sigma_t, std::uint64_t seed) {
  const DiscreteCoeffs c = discretize(p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out;
  out.reserve(duty.size());
  double temp = t0;
  for (double u : duty) {
    out.push_back(temp + sigma_t * noise(rng));
    temp = step_temperature(c, temp, u);
  }
  return out;
}

IdResult fit_linear(std::span<const double> temps, std::span<const double> duty, double dt) {
  if (!(dt > 0.0)) throw ConfigError("fit_linear: dt must be positive");
  if (temps.size() != duty.size()) throw PreconditionError("fit_linear: temperature and duty lengths differ");
  if (temps.size() < 4) throw IdentifiabilityError("fit_linear: need at least 4 samples");
  for (double u : duty)
    if (!(u >= 0.0 && u <= 1.0)) throw PreconditionError("fit_linear: duty outside [0,1]");

  const Eigen::Index rows = static_cast<Eigen::Index>(temps.size()) - 1;
  Eigen::MatrixXd x(rows, 3);
  Eigen::VectorXd y(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    x(k, 0) = temps[k];
    x(k, 1) = duty[k];
    x(k, 2) = 1.0;
    y(k) = temps[k + 1];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3)
    throw IdentifiabilityError("fit_linear: regressors are rank " + std::to_string(qr.rank()) +
                               " (need 3); the log does not excite both temperature and duty");
  const Eigen::Vector3d a = qr.solve(y);

  IdResult out;
  out.sample_count = static_cast<std::size_t>(rows);
  out.residual_rmse = std::sqrt((x * a - y).squaredNorm() / static_cast<double>(rows));
  out.params.dt = dt;
  out.params.alpha1 = (a(0) - 1.0) / dt;
  out.params.alpha2 = a(1) / dt;
  out.params.t_amb = -a(2) / (out.params.alpha1 * dt);
  try {
    out.params.validate();
  } catch (const Error& e) {
    out.diagnostic = e.what();
  }
  return out;
}

}  // namespace smalife
