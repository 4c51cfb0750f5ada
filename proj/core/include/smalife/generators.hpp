#pragma once

#include <string_view>

#include "smalife/error.hpp"

namespace smalife {

enum class Phase { heating, holding, cooling, done };

std::string_view to_string(Phase p);
/// Throws PreconditionError on an unknown name.
Phase phase_from_string(std::string_view name);

enum class Profile { c1, c2 };

std::string_view to_string(Profile p);
Profile profile_from_string(std::string_view name);

class StuckError : public Error {
 public:
  explicit StuckError(const std::string& what) : Error(ErrorCategory::stuck, what) {}
};

/// Temperature-setpoint cycling: heat at `duty` until the measurement is within
/// `tol` of the limit, keep commanding `duty` for `hold_s` while the supervisor
/// caps it, then command zero until the wire drops below `t_cool`.
struct C1Config {
  double t_set = 140.0;
  double tol = 8.0;
  double hold_s = 20.0;
  double t_cool = 36.16;  // ambient + 1 for the identified model
  double duty = 0.5;
  int v_max = 100;
  double cool_timeout_s = 600.0;
  double heat_timeout_s = 600.0;  // heating that never reaches the band

  void validate() const;
};

struct C1State {
  Phase phase = Phase::heating;
  double heat_elapsed = 0.0;
  double hold_elapsed = 0.0;
  double cool_elapsed = 0.0;
  int cycle = 1;
};

struct C1Step {
  double duty = 0.0;
  C1State state;
  bool done = false;
};

/// Throws StuckError when heating or cooling runs past its timeout.
C1Step c1_step(const C1State& st, const C1Config& cfg, double temp_meas, double dt);

/// Fixed-time cycling: `heat_s` at `duty`, then `cool_s` at zero.
struct C2Config {
  double heat_s = 45.0;
  double cool_s = 65.0;
  double duty = 0.5;
  int v_max = 100;

  void validate() const;
};

struct C2State {
  Phase phase = Phase::heating;
  double phase_elapsed = 0.0;
  int cycle = 1;
};

struct C2Step {
  double duty = 0.0;
  C2State state;
  bool done = false;
};

C2Step c2_step(const C2State& st, const C2Config& cfg, double dt);

}  // namespace smalife
