#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smalife {

struct DecayPoint {
  int cycle = 0;       // v >= 1
  double force = 0.0;  // N
};

/// Per-cycle peak force of one trial.
struct DecaySeries {
  std::vector<DecayPoint> points;
  std::string label;
  double t_set = 0.0;

  /// Throws PreconditionError unless cycles are strictly increasing and
  /// forces are finite and non-negative.
  void validate() const;
};

enum class DecayFamily { single, dual };

std::string_view to_string(DecayFamily f);
DecayFamily decay_family_from_string(std::string_view name);

/// a*exp(-b*v) + c, or a*exp(-b*v) + d*exp(-g*v) + c with g > b.
struct DecayFit {
  DecayFamily family = DecayFamily::single;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double g = 0.0;
  double rmse = 0.0;
  double f_infinity = 0.0;  // always equals c
  bool collapsed = false;   // dual fit fell back to the single family
  std::string diagnostic;

  double evaluate(double v) const;
};

/// Search constants for the variable-projection outer loops.
struct FitOptions {
  double rate_min = 1e-4;     // 1/cycle
  double rate_max = 1.0;      // 1/cycle
  int single_grid = 64;
  int dual_grid = 32;
  double golden_tol = 1e-6;   // absolute width on b
  double simplex_tol = 1e-6;  // vertex spread in log-rate space
  int simplex_max_iter = 500;
  double collinear_tol = 1e-8;
  double min_half_lives = 1.0;  // slower dual rate must halve this often over the observed cycles
  bool polish = true;         // Levenberg-Marquardt on all parameters after the search
};

/// Throws PreconditionError for fewer than 4 points.
DecayFit fit_single(const DecaySeries& s, const FitOptions& opt = {});

/// Throws PreconditionError for fewer than 6 points. Collinear rates, or a
/// slower rate completing fewer than `min_half_lives` half-lives over the
/// observed cycles, collapse to the single-family result with `collapsed` set.
DecayFit fit_double(const DecaySeries& s, const FitOptions& opt = {});

/// Lower RMSE wins; within 1e-9 N the single family is kept.
DecayFit select_model(const DecaySeries& s, const FitOptions& opt = {});

/// Linear least-squares coefficients of `forces` on {exp(-r*v) for r in rates} + 1.
/// Returned vector holds one amplitude per rate followed by the constant.
std::vector<double> project_linear(const DecaySeries& s, const std::vector<double>& rates);

double fit_rmse(const DecaySeries& s, const DecayFit& fit);

}  // namespace smalife
