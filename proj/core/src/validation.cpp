#include "smalife/validation.hpp"

#include <algorithm>
#include <numeric>

#include "smalife/analysis.hpp"

namespace smalife {

namespace {

SpecimenReport cycle_specimen(const ValidationConfig& cfg, double t_fatigue) {
  SpecimenReport rep;
  rep.t_fatigue = t_fatigue;
  const int fatigue = std::min(cfg.cycles, cfg.fatigue_cycles);
  const int recycle = cfg.cycles - fatigue;

  TrialConfig trial = cfg.base;
  trial.profile = Profile::c1;
  PlantState state = PlantState::fresh(trial.thermal.t_amb);

  if (fatigue > 0) {
    trial.t_set = t_fatigue;
    trial.v_max = fatigue;
    trial.label = "validate_fatigue";
    state = run_trial(trial).final_state;
  }
  if (recycle > 0) {
    trial.t_set = cfg.t_recycle;
    trial.v_max = recycle;
    trial.label = "validate_recycle";
    const TrialLog log = run_trial(trial, state);
    state = log.final_state;
    const FmaxResult f = max_force_per_cycle(log, windows_c1(log).windows);
    if (!f.series.points.empty()) {
      const double sum = std::accumulate(f.series.points.begin(), f.series.points.end(), 0.0,
                                         [](double acc, const DecayPoint& p) { return acc + p.force; });
      rep.mean_recycle_fmax = sum / static_cast<double>(f.series.points.size());
    }
    rep.recycle_cycles = recycle;
  }

  rep.d_final = state.d;
  PlantState probe = state;
  probe.temp = cfg.t_recycle;
  rep.force_at_recycle = blocked_force(probe, trial.fatigue);
  return rep;
}

}  // namespace

ValidationReport run_validation(const ValidationConfig& cfg) {
  if (cfg.cycles < 0 || cfg.fatigue_cycles < 0) throw ConfigError("validate: cycle counts must be non-negative");
  ValidationReport out;
  out.low = cycle_specimen(cfg, cfg.t_low);
  out.high = cycle_specimen(cfg, cfg.t_high);
  out.ratio = out.high.force_at_recycle / out.low.force_at_recycle;
  return out;
}

}  // namespace smalife
