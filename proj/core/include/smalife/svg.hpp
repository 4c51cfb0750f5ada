#pragma once

#include <string>
#include <vector>

#include "smalife/analysis.hpp"
#include "smalife/harness.hpp"

namespace smalife::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
  bool line = true;      // one <polyline>
  bool markers = false;  // one <circle> per point
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Static SVG with the panels stacked vertically. Every line series is exactly
/// one <polyline>; axes and ticks use <line> so structural checks can count
/// series.
std::string render(const std::vector<Panel>& panels, double width = 800.0, double panel_height = 420.0);

/// Per-cycle peaks as markers plus the selected fit as a line, one trial per colour.
Panel decay_panel(const std::string& title, const std::vector<TrialAnalysis>& trials);

/// Long-life force against limit temperature, one line per profile.
Panel force_curve_panel(const std::vector<ForceCurve>& curves);

/// Temperature and force traces of one trial.
std::vector<Panel> trial_panels(const TrialLog& log);

/// Distinct colours for index i.
std::string palette(std::size_t i);

}  // namespace smalife::svg
