#pragma once

#include "smalife/harness.hpp"

namespace smalife {

/// Two fresh specimens are cycled under C1, one at t_low and one at t_high,
/// for min(cycles, fatigue_cycles) cycles; both are then re-cycled at
/// t_recycle for the remaining cycles.
struct ValidationConfig {
  TrialConfig base;
  double t_low = 140.0;
  double t_high = 230.0;
  double t_recycle = 140.0;
  int cycles = 150;
  int fatigue_cycles = 100;
};

struct SpecimenReport {
  double t_fatigue = 0.0;
  double d_final = 1.0;            // degradation fraction after all cycling
  double force_at_recycle = 0.0;   // blocked force at t_recycle with d_final, N
  double mean_recycle_fmax = 0.0;  // mean per-cycle peak over the re-cycle phase, N (0 if none)
  int recycle_cycles = 0;
};

struct ValidationReport {
  SpecimenReport low;
  SpecimenReport high;
  double ratio = 1.0;  // high.force_at_recycle / low.force_at_recycle
};

/// Throws ConfigError for negative cycle counts and TrialFailure if a phase
/// gets stuck.
ValidationReport run_validation(const ValidationConfig& cfg);

}  // namespace smalife
