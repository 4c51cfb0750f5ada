#include "smalife/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>
#include <variant>

#include "smalife/config.hpp"
#include "smalife/supervisor.hpp"
#include "text.hpp"

namespace smalife {

void TrialConfig::validate() const {
  thermal.validate();
  if (std::abs(dt - thermal.dt) > 1e-12) throw ConfigError("trial dt must equal thermal.dt");
  if (supervisor_model) {
    supervisor_model->validate();
    if (std::abs(supervisor_model->dt - dt) > 1e-12) throw ConfigError("supervisor model dt must equal trial dt");
  }
  if (v_max < 1) throw ConfigError("v_max must be >= 1");
  if (!(max_duration_s >= 0.0)) throw ConfigError("max_duration_s must be non-negative");
  fatigue.validate();
  noise.validate();
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("supervisor gamma must lie in (0,1]");
  if (profile == Profile::c1) c1_effective().validate();
  else c2_effective().validate();
}

C1Config TrialConfig::c1_effective() const {
  C1Config c = c1;
  c.t_set = t_set;
  c.v_max = v_max;
  return c;
}

C2Config TrialConfig::c2_effective() const {
  C2Config c = c2;
  c.v_max = v_max;
  return c;
}

namespace {

// Both generators behind one call so the loop below stays profile-agnostic.
class Generator {
 public:
  explicit Generator(const TrialConfig& cfg) : c1_(cfg.c1_effective()), c2_(cfg.c2_effective()) {
    if (cfg.profile == Profile::c1) state_ = C1State{};
    else state_ = C2State{};
  }

  struct Output {
    double duty;
    bool done;
  };

  Output step(double temp_meas, double dt) {
    if (auto* s = std::get_if<C1State>(&state_)) {
      const C1Step r = c1_step(*s, c1_, temp_meas, dt);
      *s = r.state;
      return {r.duty, r.done};
    }
    auto& s = std::get<C2State>(state_);
    const C2Step r = c2_step(s, c2_, dt);
    s = r.state;
    return {r.duty, r.done};
  }

  Phase phase() const {
    return std::visit([](const auto& s) { return s.phase; }, state_);
  }
  int cycle() const {
    return std::visit([](const auto& s) { return s.cycle; }, state_);
  }

 private:
  C1Config c1_;
  C2Config c2_;
  std::variant<C1State, C2State> state_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TrialLog run_trial(const TrialConfig& cfg, std::optional<PlantState> initial) {
  cfg.validate();
  const DiscreteCoeffs plant_coeffs = discretize(cfg.thermal);
  const Supervisor supervisor(cfg.t_set, cfg.gamma, discretize(cfg.supervisor_model.value_or(cfg.thermal)));
  MeasurementNoise noise(cfg.noise);
  Generator gen(cfg);

  TrialLog log;
  log.config = cfg;
  // Rough upper bound on rows: a 110 s cycle at 0.2 s.
  log.rows.reserve(static_cast<std::size_t>(cfg.v_max) * static_cast<std::size_t>(std::ceil(110.0 / cfg.dt) + 1));

  PlantReading now = plant_read(initial.value_or(PlantState::fresh(cfg.thermal.t_amb)), cfg.fatigue, noise);
  for (std::size_t k = 0;; ++k) {
    TrialRow row;
    row.time_s = static_cast<double>(k) * cfg.dt;
    row.temp_true = now.state.temp;
    row.temp_meas = now.temp_meas;
    row.force_true = now.force_true;
    row.force_meas = now.force_meas;

    Generator::Output out{};
    try {
      out = gen.step(now.temp_meas, cfg.dt);
    } catch (const StuckError& e) {
      log.final_state = now.state;
      throw TrialFailure(ErrorCategory::stuck, e.what(), std::move(log));
    }

    row.cycle = std::min(gen.cycle(), cfg.v_max);
    if (out.done) {
      row.phase = Phase::done;
      log.rows.push_back(row);
      break;
    }
    row.phase = gen.phase();
    row.duty_nominal = out.duty;
    row.duty_applied = supervisor.saturate(out.duty, now.temp_meas);
    log.rows.push_back(row);

    if (cfg.max_duration_s > 0.0 && row.time_s >= cfg.max_duration_s) {
      log.final_state = now.state;
      throw TrialFailure(ErrorCategory::stuck,
                         "trial exceeded max_duration_s=" + text::exact(cfg.max_duration_s) + " s", std::move(log));
    }
    now = plant_step(now.state, row.duty_applied, plant_coeffs, cfg.fatigue, noise, cfg.dt);
  }
  log.final_state = now.state;
  return log;
}

std::uint64_t derive_seed(std::uint64_t base, double t_set, Profile profile) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(t_set));
  h = splitmix64(h ^ (profile == Profile::c1 ? 0x1ULL : 0x2ULL));
  return h;
}

std::string cell_label(const SweepCell& cell) {
  return std::string(to_string(cell.profile)) + "_T" + text::exact(cell.t_set);
}

TrialConfig cell_config(const TrialConfig& base, const SweepCell& cell) {
  TrialConfig cfg = base;
  cfg.profile = cell.profile;
  cfg.t_set = cell.t_set;
  cfg.label = cell_label(cell);
  cfg.noise.seed = derive_seed(base.noise.seed, cell.t_set, cell.profile);
  return cfg;
}

std::vector<SweepCell> make_cells(const std::vector<double>& c1_t_sets, const std::vector<double>& c2_t_sets) {
  std::vector<SweepCell> cells;
  for (double t : c1_t_sets) cells.push_back({Profile::c1, t});
  for (double t : c2_t_sets) cells.push_back({Profile::c2, t});
  return cells;
}

std::vector<CellResult> run_sweep(const TrialConfig& base, const std::vector<SweepCell>& cells, int jobs) {
  if (cells.empty()) throw PreconditionError("run_sweep: no cells");
  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      CellResult& r = results[i];
      r.cell = cells[i];
      try {
        r.config = cell_config(base, cells[i]);
        r.config_hash = config_hash(r.config);
        r.log = run_trial(r.config);
        r.ok = true;
      } catch (const TrialFailure& e) {
        r.error = e.what();
        r.log = e.partial();
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };

  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
    if (a.cell.profile != b.cell.profile) return a.cell.profile < b.cell.profile;
    return a.cell.t_set < b.cell.t_set;
  });
  return results;
}

}  // namespace smalife
