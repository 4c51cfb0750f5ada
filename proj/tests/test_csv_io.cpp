#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smalife/config.hpp"
#include "smalife/csv_io.hpp"
#include "smalife/error.hpp"
#include "test_support.hpp"

using namespace smalife;
namespace fs = std::filesystem;

namespace {

TrialLog sample_log() {
  TrialConfig cfg = test::noiseless(Profile::c2, 140.0, 1);
  cfg.noise = NoiseParams{};
  cfg.label = "sample";
  return run_trial(cfg);
}

std::string to_csv(const TrialLog& log) {
  std::ostringstream out;
  write_trial_csv(log, out);
  return out.str();
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_trial_csv(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::string replace_line(const std::string& text, std::size_t line, const std::string& with) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string l;
  for (std::size_t n = 1; std::getline(in, l); ++n) out << (n == line ? with : l) << '\n';
  return out.str();
}

std::size_t header_line(const std::string& text) {
  std::istringstream in(text);
  std::string l;
  for (std::size_t n = 1; std::getline(in, l); ++n)
    if (l == kTrialHeader) return n;
  return 0;
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "smalife_csv_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("round trip preserves every numeric column within 1e-9 relative") {
  const TrialLog log = sample_log();
  std::istringstream in(to_csv(log));
  const TrialLog back = read_trial_csv(in);
  REQUIRE(back.rows.size() == log.rows.size());
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const TrialRow &a = log.rows[i], &b = back.rows[i];
    CHECK(close(a.time_s, b.time_s));
    CHECK(a.cycle == b.cycle);
    CHECK(a.phase == b.phase);
    CHECK(close(a.duty_nominal, b.duty_nominal));
    CHECK(close(a.duty_applied, b.duty_applied));
    CHECK(close(a.temp_true, b.temp_true));
    CHECK(close(a.temp_meas, b.temp_meas));
    CHECK(close(a.force_true, b.force_true));
    CHECK(close(a.force_meas, b.force_meas));
  }
}

TEST_CASE("metadata survives the round trip") {
  const TrialLog log = sample_log();
  std::istringstream in(to_csv(log));
  const TrialLog back = read_trial_csv(in);
  CHECK(flatten(back.config) == flatten(log.config));
  CHECK(config_hash(back.config) == config_hash(log.config));
  CHECK(to_csv(back) == to_csv(log));
}

TEST_CASE("malformed inputs report the offending line") {
  const std::string good = to_csv(sample_log());
  const std::size_t h = header_line(good);
  REQUIRE(h > 1);

  CHECK(error_line(replace_line(good, h, "time,cycle")) == h);
  CHECK(error_line(replace_line(good, h + 3, "0.6,1,heating,0.5")) == h + 3);
  CHECK(error_line(replace_line(good, h + 4, "0.8,1,heating,x,0.5,1,1,1,1")) == h + 4);
  CHECK(error_line(replace_line(good, h + 5, "1.0,1,warming,0.5,0.5,1,1,1,1")) == h + 5);
  CHECK(error_line(replace_line(good, h + 6, "0.1,1,heating,0.5,0.5,1,1,1,1")) == h + 6);
  CHECK(error_line(replace_line(good, 2, "# no equals sign")) == 2);
  CHECK(error_line(replace_line(good, 1, "# format=other")) == 1);
}

TEST_CASE("truncated file fails at the cut line") {
  const std::string good = to_csv(sample_log());
  const std::size_t h = header_line(good);
  // Cut the final row after its third field.
  const std::size_t last_start = good.rfind('\n', good.size() - 2) + 1;
  std::size_t pos = last_start;
  for (int i = 0; i < 3; ++i) pos = good.find(',', pos) + 1;
  const std::string cut = good.substr(0, pos);
  const std::size_t lines = static_cast<std::size_t>(std::count(cut.begin(), cut.end(), '\n')) + 1;
  CHECK(error_line(cut) == lines);
  CHECK(lines > h);
}

TEST_CASE("path reader names the file and keeps the line") {
  const fs::path p = temp_dir() / "broken.csv";
  {
    std::ofstream out(p);
    out << "# format=smalife-trial-v1\nnot,a,header\n";
  }
  try {
    read_trial_csv(p);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("broken.csv") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_trial_csv(temp_dir() / "missing.csv"), IoError);
}

TEST_CASE("identification logs") {
  const fs::path bare = temp_dir() / "bare.csv";
  {
    std::ofstream out(bare);
    out << "temp_C,duty\n35.0,0.5\n38.0,0.2\n39.0,0.0\n";
  }
  const IdLog a = read_id_csv(bare, 0.5);
  CHECK(a.temps == std::vector<double>{35.0, 38.0, 39.0});
  CHECK(a.duty == std::vector<double>{0.5, 0.2, 0.0});
  CHECK(a.dt == 0.5);

  const fs::path trial = temp_dir() / "trial.csv";
  const TrialLog log = sample_log();
  write_trial_csv(log, trial);
  const IdLog b = read_id_csv(trial, 1.0);
  CHECK(b.dt == doctest::Approx(0.2));
  CHECK(b.temps.size() == log.rows.size());

  const fs::path bad = temp_dir() / "bad.csv";
  {
    std::ofstream out(bad);
    out << "35.0,0.5\n38.0\n";
  }
  CHECK_THROWS_AS(read_id_csv(bad, 0.2), ParseError);
}

TEST_CASE("curve file round trip") {
  std::vector<ForceCurve> curves{
      build_force_curve(Profile::c1, {{118, 1.53, DecayFamily::dual, 0.0088, ""}, {140, 1.58, DecayFamily::single, 0.008, ""}}),
      build_force_curve(Profile::c2, {{130, 1.583, DecayFamily::dual, 0.0087, ""}})};
  const fs::path p = temp_dir() / "curve.csv";
  write_curve_csv(curves, p);
  const auto back = read_curve_csv(p);
  REQUIRE(back.size() == 2);
  CHECK(back[0].points[1].f_inf == 1.58);
  CHECK(back[0].points[0].family == DecayFamily::dual);
  CHECK(back[1].profile == Profile::c2);
}

TEST_CASE("golden trial log is byte-stable") {
  TrialConfig base = default_config().base;
  base.v_max = 1;
  const TrialConfig cfg = cell_config(base, {Profile::c2, 140.0});
  const std::string fresh = to_csv(run_trial(cfg));
  const fs::path golden = fs::path(SMALIFE_GOLDEN_DIR) / "c2_T140_v1.csv";
  if (std::getenv("SMALIFE_UPDATE_GOLDEN")) {
    std::ofstream(golden, std::ios::binary) << fresh;
  }
  std::ifstream in(golden, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file; rerun with SMALIFE_UPDATE_GOLDEN=1");
  std::stringstream stored;
  stored << in.rdbuf();
  CHECK(stored.str() == fresh);
}
