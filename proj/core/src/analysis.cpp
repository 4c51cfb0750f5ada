#include "smalife/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "text.hpp"

namespace smalife {

namespace {

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return (lo + hi) / 2.0;
}

}  // namespace

WindowSet windows_c2(const TrialLog& log, double window_s) {
  const double dt = log.config.dt;
  const auto span = static_cast<std::size_t>(std::llround(window_s / dt));
  const auto& rows = log.rows;

  WindowSet out;
  bool any_heating = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].phase != Phase::heating) continue;
    any_heating = true;
    if (i > 0 && rows[i - 1].phase == Phase::heating && rows[i - 1].cycle == rows[i].cycle) continue;
    if (i + span > rows.size()) {
      out.warnings.push_back("cycle " + std::to_string(rows[i].cycle) + ": log ends " +
                             text::precise((rows.size() - i) * dt, 6) + " s into a " + text::exact(window_s) +
                             " s window; dropped");
      continue;
    }
    out.windows.push_back({rows[i].cycle, i, i + span, Profile::c2});
  }
  if (!any_heating && !rows.empty())
    throw PreconditionError("windows_c2: log '" + log.config.label + "' has no heating phase annotations");
  return out;
}

WindowSet windows_c1(const TrialLog& log, double band) {
  const double threshold = log.config.t_set - band;
  const auto& rows = log.rows;

  // Raw band episodes, keeping the longest per cycle so measurement noise at
  // the band edge cannot split a cycle.
  std::map<int, std::pair<std::size_t, std::size_t>> raw;
  WindowSet out;
  std::size_t i = 0;
  while (i < rows.size()) {
    while (i < rows.size() && !(rows[i].temp_meas > threshold)) ++i;
    if (i >= rows.size()) break;
    const std::size_t entry = i;
    while (i < rows.size() && !(rows[i].temp_meas < threshold)) ++i;
    if (i >= rows.size()) {
      out.warnings.push_back("cycle " + std::to_string(rows[entry].cycle) +
                             ": log ends before the temperature leaves the band; dropped");
      break;
    }
    const int cycle = rows[entry].cycle;
    auto [it, inserted] = raw.try_emplace(cycle, entry, i);
    if (!inserted && i - entry > it->second.second - it->second.first) it->second = {entry, i};
  }

  for (const auto& [cycle, range] : raw) {
    const auto [k, end] = range;
    out.windows.push_back({cycle, k + (end - k) / 2, end, Profile::c1});
  }

  int last_cycle = 0;
  for (const TrialRow& r : rows)
    if (r.phase != Phase::done) last_cycle = std::max(last_cycle, r.cycle);
  for (int v = 1; v <= last_cycle; ++v)
    if (!raw.contains(v))
      out.warnings.push_back("cycle " + std::to_string(v) + ": temperature never exceeded " +
                             text::precise(threshold, 6) + " degC; skipped");
  return out;
}

WindowSet windows_for(const TrialLog& log) {
  return log.config.profile == Profile::c1 ? windows_c1(log) : windows_c2(log);
}

FilterResult filter_outliers(std::span<const double> forces, double k, double max_fraction) {
  FilterResult out;
  out.kept.assign(forces.begin(), forces.end());
  if (forces.size() < 5) return out;

  const double med = median(out.kept);
  std::vector<double> dev;
  dev.reserve(forces.size());
  for (double f : forces) dev.push_back(std::abs(f - med));
  const double scaled_mad = 1.4826 * median(dev);
  const double limit = k * scaled_mad;

  std::vector<double> kept;
  kept.reserve(forces.size());
  for (double f : forces)
    if (std::abs(f - med) <= limit) kept.push_back(f);

  const std::size_t removed = forces.size() - kept.size();
  if (static_cast<double>(removed) > max_fraction * static_cast<double>(forces.size())) {
    out.capped = true;
    return out;
  }
  out.kept = std::move(kept);
  out.removed = removed;
  return out;
}

FmaxResult max_force_per_cycle(const TrialLog& log, const std::vector<CycleWindow>& windows) {
  FmaxResult out;
  out.series.label = log.config.label;
  out.series.t_set = log.config.t_set;
  std::vector<double> forces;
  for (const CycleWindow& w : windows) {
    if (!(w.start < w.end) || w.end > log.rows.size())
      throw PreconditionError("window for cycle " + std::to_string(w.cycle) + " is outside the log");
    forces.clear();
    for (std::size_t i = w.start; i < w.end; ++i) forces.push_back(log.rows[i].force_meas);
    const FilterResult f = filter_outliers(forces);
    if (f.capped)
      out.warnings.push_back("cycle " + std::to_string(w.cycle) + ": outlier filter would drop more than 20% " +
                             "of the window; kept all samples");
    if (f.kept.empty()) {
      out.warnings.push_back("cycle " + std::to_string(w.cycle) + ": empty window; omitted");
      continue;
    }
    out.series.points.push_back({w.cycle, *std::max_element(f.kept.begin(), f.kept.end())});
  }
  return out;
}

ForceCurve build_force_curve(Profile profile, std::vector<CurvePoint> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.t_set < b.t_set; });
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].t_set == points[i - 1].t_set)
      throw PreconditionError("force curve " + std::string(to_string(profile)) + ": duplicate t_set " +
                              text::exact(points[i].t_set));
  return ForceCurve{profile, std::move(points)};
}

KneeResult plateau_knee(const ForceCurve& curve, double delta) {
  const auto& p = curve.points;
  if (p.empty()) throw PreconditionError("plateau_knee: empty curve");
  double running_max = p.front().f_inf;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i].f_inf < running_max - delta) return {p[i - 1].t_set, i > 1};
    running_max = std::max(running_max, p[i].f_inf);
  }
  return {p.back().t_set, true};
}

LimitResult select_limit(const ForceCurve& c1, const ForceCurve& c2, double delta) {
  for (const ForceCurve* c : {&c1, &c2})
    if (c->points.size() < 3)
      throw PreconditionError("select_limit: profile " + std::string(to_string(c->profile)) +
                              " needs at least 3 temperatures");
  const double lo = std::max(c1.points.front().t_set, c2.points.front().t_set);
  const double hi = std::min(c1.points.back().t_set, c2.points.back().t_set);
  if (lo > hi) throw PreconditionError("select_limit: the two curves do not overlap in temperature");

  LimitResult out;
  const KneeResult k1 = plateau_knee(c1, delta);
  const KneeResult k2 = plateau_knee(c2, delta);
  out.knee_c1 = k1.knee;
  out.knee_c2 = k2.knee;
  for (const auto& [k, c] : {std::pair{k1, &c1}, std::pair{k2, &c2}})
    if (!k.plateau_found)
      out.diagnostics.push_back("profile " + std::string(to_string(c->profile)) +
                                ": no plateau; falls by more than delta after the first temperature");
  out.limit = std::min(k1.knee, k2.knee);
  return out;
}

TrialAnalysis analyze_trial(const TrialLog& log) {
  TrialAnalysis out;
  out.label = log.config.label;
  out.profile = log.config.profile;
  out.t_set = log.config.t_set;

  WindowSet w = windows_for(log);
  out.warnings = std::move(w.warnings);
  FmaxResult f = max_force_per_cycle(log, w.windows);
  out.warnings.insert(out.warnings.end(), f.warnings.begin(), f.warnings.end());
  out.fmax = std::move(f.series);
  out.fit = select_model(out.fmax);
  if (!out.fit.diagnostic.empty()) out.warnings.push_back("fit: " + out.fit.diagnostic);
  return out;
}

std::vector<ForceCurve> build_curves(const std::vector<TrialAnalysis>& trials) {
  std::map<Profile, std::vector<CurvePoint>> grouped;
  for (const TrialAnalysis& t : trials)
    grouped[t.profile].push_back({t.t_set, t.fit.f_infinity, t.fit.family, t.fit.rmse, t.label});
  std::vector<ForceCurve> out;
  for (auto& [profile, points] : grouped) out.push_back(build_force_curve(profile, std::move(points)));
  return out;
}

}  // namespace smalife
