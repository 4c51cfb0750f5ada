#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smalife/fitting.hpp"
#include "smalife/generators.hpp"
#include "smalife/harness.hpp"

namespace smalife {

/// Half-open row range [start, end) of one heating cycle.
struct CycleWindow {
  int cycle = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  Profile profile = Profile::c1;
};

struct WindowSet {
  std::vector<CycleWindow> windows;
  std::vector<std::string> warnings;
};

/// Fixed-time windows: each cycle's first heating row through `window_s`
/// seconds later, located from the logged phase column. A cycle whose window
/// would run past the end of the log is dropped with a warning.
WindowSet windows_c2(const TrialLog& log, double window_s = 45.0);

/// Temperature-band windows on the measured temperature: from the first row
/// above t_set - band to the next row below it, then the first half is
/// discarded as transient. Cycles that never enter the band are reported.
WindowSet windows_c1(const TrialLog& log, double band = 8.0);

/// Dispatches on log.config.profile.
WindowSet windows_for(const TrialLog& log);

struct FilterResult {
  std::vector<double> kept;
  std::size_t removed = 0;
  bool capped = false;  // too many flagged; input passed through unchanged
};

/// Hampel rule: drop samples more than `k` scaled MADs from the median, unless
/// that would drop more than `max_fraction` of the window. Windows under 5
/// samples pass through.
FilterResult filter_outliers(std::span<const double> forces, double k = 5.0, double max_fraction = 0.2);

struct FmaxResult {
  DecaySeries series;
  std::vector<std::string> warnings;
};

/// Peak of the filtered measured force in each window.
FmaxResult max_force_per_cycle(const TrialLog& log, const std::vector<CycleWindow>& windows);

struct CurvePoint {
  double t_set = 0.0;
  double f_inf = 0.0;
  DecayFamily family = DecayFamily::single;
  double rmse = 0.0;
  std::string label;
};

struct ForceCurve {
  Profile profile = Profile::c1;
  std::vector<CurvePoint> points;  // strictly increasing t_set
};

/// Sorts by temperature. Throws PreconditionError on duplicate temperatures.
ForceCurve build_force_curve(Profile profile, std::vector<CurvePoint> points);

struct KneeResult {
  double knee = 0.0;
  bool plateau_found = true;
};

/// Highest tested temperature before the curve first drops more than `delta`
/// below its running maximum.
KneeResult plateau_knee(const ForceCurve& curve, double delta);

struct LimitResult {
  double limit = 0.0;
  double knee_c1 = 0.0;
  double knee_c2 = 0.0;
  std::vector<std::string> diagnostics;
};

/// The conservative long-life limit: the lower of the two profiles' knees.
/// Throws PreconditionError unless each curve has >= 3 points and their
/// temperature ranges overlap.
LimitResult select_limit(const ForceCurve& c1, const ForceCurve& c2, double delta = 0.1);

/// Windows, per-cycle peaks and model selection for one trial log.
struct TrialAnalysis {
  std::string label;
  Profile profile = Profile::c1;
  double t_set = 0.0;
  DecaySeries fmax;
  DecayFit fit;
  std::vector<std::string> warnings;
};

TrialAnalysis analyze_trial(const TrialLog& log);

/// Groups analyses into one curve per profile present, sorted c1 then c2.
std::vector<ForceCurve> build_curves(const std::vector<TrialAnalysis>& trials);

}  // namespace smalife
