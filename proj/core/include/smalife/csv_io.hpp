#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smalife/analysis.hpp"
#include "smalife/fitting.hpp"
#include "smalife/harness.hpp"

namespace smalife {

// Trial log layout:
//
//   # format=smalife-trial-v1
//   # label=c1_T140
//   # ...one key=value line per TrialConfig field (see flatten())
//   time_s,cycle,phase,duty_nominal,duty_applied,temp_true_C,temp_meas_C,force_true_N,force_meas_N
//   0,1,heating,0.5,0.5,35.16,35.41,0.0004,0.013
//
// Reals are written with 10 significant digits.

inline constexpr int kCsvDigits = 10;
inline constexpr const char* kTrialHeader =
    "time_s,cycle,phase,duty_nominal,duty_applied,temp_true_C,temp_meas_C,force_true_N,force_meas_N";

void write_trial_csv(const TrialLog& log, std::ostream& out);
void write_trial_csv(const TrialLog& log, const std::filesystem::path& path);

/// Throws ParseError naming the 1-based line for a bad header, column-count
/// mismatch, unparsable number, unknown phase or non-increasing time.
TrialLog read_trial_csv(std::istream& in);
TrialLog read_trial_csv(const std::filesystem::path& path);

/// Temperature/duty pairs for identification.
struct IdLog {
  std::vector<double> temps;
  std::vector<double> duty;
  double dt = 0.2;
};

/// Accepts a trial CSV (uses temp_meas_C and duty_applied, dt from metadata)
/// or a bare two-column `temp_C,duty` file (header optional, dt = `dt`).
IdLog read_id_csv(const std::filesystem::path& path, double dt);

/// cycle,f_max
void write_fmax_csv(const DecaySeries& s, const std::filesystem::path& path);

/// profile,t_set_C,f_inf_N,family,rmse
void write_curve_csv(const std::vector<ForceCurve>& curves, const std::filesystem::path& path);
std::vector<ForceCurve> read_curve_csv(const std::filesystem::path& path);

}  // namespace smalife
