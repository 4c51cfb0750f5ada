#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smalife/error.hpp"
#include "smalife/generators.hpp"
#include "smalife/plant.hpp"
#include "smalife/thermal.hpp"

namespace smalife {

/// Everything needed to reproduce one trial. The plant and the supervisor's
/// model share `thermal` unless `supervisor_model` is set.
struct TrialConfig {
  std::string label;
  Profile profile = Profile::c1;
  double t_set = 140.0;
  double gamma = 0.15;
  int v_max = 100;
  double dt = 0.2;
  ThermalParams thermal;
  std::optional<ThermalParams> supervisor_model;
  FatigueParams fatigue;
  NoiseParams noise;
  C1Config c1;
  C2Config c2;
  double max_duration_s = 0.0;  // 0 = no trial-level timeout

  /// Throws ConfigError; requires dt == thermal.dt and v_max >= 1.
  void validate() const;

  /// Generator configs with the trial-level t_set and v_max applied.
  C1Config c1_effective() const;
  C2Config c2_effective() const;
};

struct TrialRow {
  double time_s = 0.0;
  int cycle = 1;
  Phase phase = Phase::heating;
  double duty_nominal = 0.0;
  double duty_applied = 0.0;
  double temp_true = 0.0;
  double temp_meas = 0.0;
  double force_true = 0.0;
  double force_meas = 0.0;
};

struct TrialLog {
  TrialConfig config;
  std::vector<TrialRow> rows;
  /// True plant state after the last row. Kept in memory only; not part of the CSV.
  PlantState final_state;
};

/// A trial that stopped early. Carries everything logged before the failure.
class TrialFailure : public Error {
 public:
  TrialFailure(ErrorCategory category, const std::string& what, TrialLog partial)
      : Error(category, what), partial_(std::move(partial)) {}

  const TrialLog& partial() const noexcept { return partial_; }

 private:
  TrialLog partial_;
};

/// Steps measure -> generator -> supervisor -> plant at the fixed period until
/// the generator reports done. The terminal sample is logged with phase
/// `done` and zero duty. Throws TrialFailure if the generator gets stuck or
/// max_duration_s elapses.
TrialLog run_trial(const TrialConfig& cfg, std::optional<PlantState> initial = std::nullopt);

struct SweepCell {
  Profile profile = Profile::c1;
  double t_set = 0.0;
};

struct CellResult {
  SweepCell cell;
  TrialConfig config;
  std::string config_hash;
  bool ok = false;
  std::string error;
  TrialLog log;  // partial when !ok
};

/// Per-cell seed derived from the base seed, the limit temperature and the
/// profile, so results do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t base, double t_set, Profile profile);

/// Trial config for one sweep cell: fresh plant, derived seed, label like "c1_T140".
TrialConfig cell_config(const TrialConfig& base, const SweepCell& cell);

std::string cell_label(const SweepCell& cell);

/// Runs every cell on up to `jobs` threads. Failed cells are reported, not
/// thrown. Output is sorted by (profile, t_set).
std::vector<CellResult> run_sweep(const TrialConfig& base, const std::vector<SweepCell>& cells, int jobs = 1);

/// C1 cells followed by C2 cells for the given grids.
std::vector<SweepCell> make_cells(const std::vector<double>& c1_t_sets, const std::vector<double>& c2_t_sets);

}  // namespace smalife
