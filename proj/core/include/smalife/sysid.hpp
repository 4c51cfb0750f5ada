#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smalife/thermal.hpp"

namespace smalife {

/// Piecewise-constant random duty: each `segment_s` block holds one uniform
/// draw from [duty_lo, duty_hi].
struct ExcitationConfig {
  double duration = 600.0;
  double dt = 0.2;
  double segment_s = 2.0;
  double duty_lo = 0.0;
  double duty_hi = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

std::vector<double> excite(const ExcitationConfig& cfg);

/// Measured temperatures for a duty sequence driven through the discrete
/// model from `t0`. Element k is the reading taken before duty[k] is applied.
std::vector<double> simulate_response(const ThermalParams& p, std::span<const double> duty, double t0,
                                      double sigma_t, std::uint64_t seed);

struct IdResult {
  ThermalParams params;
  double residual_rmse = 0.0;  // degC, one-step-ahead
  std::size_t sample_count = 0;
  std::string diagnostic;      // non-empty when the recovered params violate ThermalParams invariants
};

/// One-step-ahead least squares T[k+1] = a1*T[k] + a2*u[k] + a3 over all
/// consecutive pairs, solved by column-pivoted QR, then mapped back to
/// continuous parameters. Throws IdentifiabilityError for rank-deficient
/// regressors and ConfigError for dt <= 0 or mismatched inputs.
IdResult fit_linear(std::span<const double> temps, std::span<const double> duty, double dt);

}  // namespace smalife
