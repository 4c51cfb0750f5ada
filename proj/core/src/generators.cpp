#include "smalife/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smalife {

namespace {

// Timers accumulate dt in floating point; 100 * 0.2 lands a hair under 20.
bool reached(double elapsed, double limit) { return elapsed >= limit - 1e-9 * std::max(1.0, limit); }

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::heating: return "heating";
    case Phase::holding: return "holding";
    case Phase::cooling: return "cooling";
    case Phase::done: return "done";
  }
  return "unknown";
}

Phase phase_from_string(std::string_view name) {
  if (name == "heating") return Phase::heating;
  if (name == "holding") return Phase::holding;
  if (name == "cooling") return Phase::cooling;
  if (name == "done") return Phase::done;
  throw PreconditionError("unknown phase '" + std::string(name) + "'");
}

std::string_view to_string(Profile p) { return p == Profile::c1 ? "c1" : "c2"; }

Profile profile_from_string(std::string_view name) {
  if (name == "c1") return Profile::c1;
  if (name == "c2") return Profile::c2;
  throw PreconditionError("unknown profile '" + std::string(name) + "' (expected c1 or c2)");
}

void C1Config::validate() const {
  if (!(tol > 0.0)) throw ConfigError("c1.tol must be positive");
  if (!(hold_s > 0.0)) throw ConfigError("c1.hold_s must be positive");
  if (!(duty > 0.0 && duty <= 1.0)) throw ConfigError("c1.duty must lie in (0,1]");
  if (!(t_cool < t_set - tol)) throw ConfigError("c1.t_cool must be below t_set - tol");
  if (v_max < 1) throw ConfigError("c1.v_max must be >= 1");
  if (!(cool_timeout_s > 0.0) || !(heat_timeout_s > 0.0)) throw ConfigError("c1 timeouts must be positive");
}

void C2Config::validate() const {
  if (!(heat_s > 0.0) || !(cool_s > 0.0)) throw ConfigError("c2.heat_s and c2.cool_s must be positive");
  if (!(duty > 0.0 && duty <= 1.0)) throw ConfigError("c2.duty must lie in (0,1]");
  if (v_max < 1) throw ConfigError("c2.v_max must be >= 1");
}

C1Step c1_step(const C1State& st, const C1Config& cfg, double temp_meas, double dt) {
  C1Step out{.duty = 0.0, .state = st, .done = false};
  C1State& next = out.state;
  if (next.cycle > cfg.v_max) {
    next.phase = Phase::done;
    out.done = true;
    return out;
  }

  const bool in_band = std::abs(temp_meas - cfg.t_set) < cfg.tol;
  switch (next.phase) {
    case Phase::heating:
      if (in_band) {
        next.phase = Phase::holding;
        next.hold_elapsed = 0.0;
      } else if (reached(next.heat_elapsed, cfg.heat_timeout_s)) {
        throw StuckError("c1 cycle " + std::to_string(next.cycle) + " did not come within " +
                         std::to_string(cfg.tol) + " degC of " + std::to_string(cfg.t_set) + " degC within " +
                         std::to_string(cfg.heat_timeout_s) + " s");
      }
      break;
    case Phase::holding:
      // The hold timer keeps running if noise pushes the reading out of band;
      // only the exit check needs the band.
      if (in_band && reached(next.hold_elapsed, cfg.hold_s)) {
        next.phase = Phase::cooling;
        next.cool_elapsed = 0.0;
      }
      break;
    case Phase::cooling:
      if (temp_meas < cfg.t_cool) {
        ++next.cycle;
        next.phase = Phase::heating;
        next.heat_elapsed = 0.0;
        next.hold_elapsed = 0.0;
        next.cool_elapsed = 0.0;
        if (next.cycle > cfg.v_max) {
          next.phase = Phase::done;
          out.done = true;
          return out;
        }
      } else if (reached(next.cool_elapsed, cfg.cool_timeout_s)) {
        throw StuckError("c1 cycle " + std::to_string(next.cycle) + " did not cool below " +
                         std::to_string(cfg.t_cool) + " degC within " +
                         std::to_string(cfg.cool_timeout_s) + " s");
      }
      break;
    case Phase::done:
      out.done = true;
      return out;
  }

  out.duty = next.phase == Phase::cooling ? 0.0 : cfg.duty;
  if (next.phase == Phase::heating) next.heat_elapsed += dt;
  if (next.phase == Phase::holding) next.hold_elapsed += dt;
  if (next.phase == Phase::cooling) next.cool_elapsed += dt;
  return out;
}

C2Step c2_step(const C2State& st, const C2Config& cfg, double dt) {
  C2Step out{.duty = 0.0, .state = st, .done = false};
  C2State& next = out.state;
  if (next.cycle > cfg.v_max || next.phase == Phase::done) {
    next.phase = Phase::done;
    out.done = true;
    return out;
  }

  if (next.phase == Phase::heating && reached(next.phase_elapsed, cfg.heat_s)) {
    next.phase = Phase::cooling;
    next.phase_elapsed = 0.0;
  }
  if (next.phase == Phase::cooling && reached(next.phase_elapsed, cfg.cool_s)) {
    ++next.cycle;
    next.phase = Phase::heating;
    next.phase_elapsed = 0.0;
    if (next.cycle > cfg.v_max) {
      next.phase = Phase::done;
      out.done = true;
      return out;
    }
  }

  out.duty = next.phase == Phase::heating ? cfg.duty : 0.0;
  next.phase_elapsed += dt;
  return out;
}

}  // namespace smalife
