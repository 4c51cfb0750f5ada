#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "smalife/config.hpp"
#include "smalife/csv_io.hpp"
#include "smalife/harness.hpp"
#include "test_support.hpp"

using namespace smalife;

TEST_CASE("one C2 cycle spans 110 s plus the terminal sample") {
  const TrialLog log = run_trial(test::noiseless(Profile::c2, 140.0, 1));
  CHECK(log.rows.size() == 551);
  CHECK(log.rows.front().time_s == 0.0);
  CHECK(log.rows.back().time_s == doctest::Approx(110.0));
  CHECK(log.rows.back().phase == Phase::done);
  CHECK(log.rows.back().duty_applied == 0.0);
}

TEST_CASE("zero-noise containment at 140") {
  for (Profile p : {Profile::c1, Profile::c2}) {
    const TrialLog log = run_trial(test::noiseless(p, 140.0, 5));
    double peak = 0.0;
    for (const TrialRow& r : log.rows) peak = std::max(peak, r.temp_true);
    CHECK(peak <= 140.0 + 1e-6);
  }
}

TEST_CASE("same config and seed give byte-identical CSV") {
  TrialConfig cfg = test::noiseless(Profile::c1, 150.0, 3);
  cfg.noise = NoiseParams{};
  std::ostringstream a, b;
  write_trial_csv(run_trial(cfg), a);
  write_trial_csv(run_trial(cfg), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("row invariants") {
  TrialConfig cfg = test::noiseless(Profile::c1, 200.0, 3);
  cfg.noise = NoiseParams{};
  cfg.c1.duty = 0.6;
  const TrialLog log = run_trial(cfg);
  const FatigueParams fp;
  CHECK(log.rows.front().force_true ==
        doctest::Approx(fp.f0 * phase_fraction(log.rows.front().temp_true, fp)).epsilon(1e-12));
  for (const TrialRow& r : log.rows) {
    CHECK(r.duty_applied >= 0.0);
    CHECK(r.duty_applied <= 1.0);
    CHECK(r.duty_applied <= r.duty_nominal);
  }
}

TEST_CASE("continuing from a supplied state keeps its degradation") {
  TrialConfig cfg = test::noiseless(Profile::c1, 140.0, 3);
  const TrialLog first = run_trial(cfg);
  CHECK(first.final_state.d < 1.0);
  const TrialLog second = run_trial(cfg, first.final_state);
  CHECK(second.final_state.d <= first.final_state.d);
  CHECK(second.rows.front().temp_true == first.final_state.temp);
}

TEST_CASE("heating that cannot reach the band is reported as stuck with a partial log") {
  TrialConfig cfg = test::noiseless(Profile::c1, 230.0, 2);
  cfg.c1.heat_timeout_s = 60.0;  // duty 0.5 settles near 220 degC
  try {
    run_trial(cfg);
    FAIL("expected a stuck trial");
  } catch (const TrialFailure& e) {
    CHECK(e.category() == ErrorCategory::stuck);
    CHECK(!e.partial().rows.empty());
  }
}

TEST_CASE("trial-level timeout") {
  TrialConfig cfg = test::noiseless(Profile::c2, 140.0, 10);
  cfg.max_duration_s = 50.0;
  CHECK_THROWS_AS(run_trial(cfg), TrialFailure);
}

TEST_CASE("config validation rejects bad trials") {
  TrialConfig cfg = test::noiseless(Profile::c1, 140.0, 0);
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
  cfg = test::noiseless(Profile::c1, 140.0, 1);
  cfg.dt = 0.1;
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
  cfg = test::noiseless(Profile::c1, 140.0, 1);
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(run_trial(cfg), ConfigError);
}

TEST_CASE("sweep: 8 temperatures x 2 profiles give 16 sorted logs") {
  TrialConfig base = test::noiseless(Profile::c1, 140.0, 2);
  base.c1.duty = 0.6;
  const std::vector<double> temps{118, 130, 140, 150, 162, 175, 200, 230};
  const auto results = run_sweep(base, make_cells(temps, temps), 1);
  REQUIRE(results.size() == 16);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].ok);
    CHECK(results[i].cell.profile == (i < 8 ? Profile::c1 : Profile::c2));
    CHECK(results[i].cell.t_set == temps[i % 8]);
  }
}

TEST_CASE("sweep: serial and parallel runs agree exactly") {
  TrialConfig base = test::noiseless(Profile::c1, 140.0, 2);
  base.noise = NoiseParams{};
  base.c1.duty = 0.6;
  const auto cells = make_cells({118, 150, 230}, {130, 200});
  const auto serial = run_sweep(base, cells, 1);
  const auto parallel = run_sweep(base, cells, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    std::ostringstream a, b;
    write_trial_csv(serial[i].log, a);
    write_trial_csv(parallel[i].log, b);
    CHECK(a.str() == b.str());
    CHECK(serial[i].config_hash == parallel[i].config_hash);
  }
}

TEST_CASE("sweep: a failing cell is reported and the rest continue") {
  TrialConfig base = test::noiseless(Profile::c1, 140.0, 2);
  base.c1.heat_timeout_s = 60.0;
  const auto results = run_sweep(base, make_cells({140, 230}, {}), 2);
  REQUIRE(results.size() == 2);
  CHECK(results[0].ok);
  CHECK_FALSE(results[1].ok);
  CHECK_FALSE(results[1].error.empty());
  CHECK_FALSE(results[1].log.rows.empty());
}

TEST_CASE("derived seeds depend on every key component") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t base : {1ULL, 2ULL})
    for (double t : {118.0, 140.0})
      for (Profile p : {Profile::c1, Profile::c2}) seeds.insert(derive_seed(base, t, p));
  CHECK(seeds.size() == 8);
  CHECK(derive_seed(1, 140.0, Profile::c1) == derive_seed(1, 140.0, Profile::c1));
  CHECK(cell_label({Profile::c1, 140.0}) == "c1_T140");
  CHECK(cell_label({Profile::c2, 162.5}) == "c2_T162.5");
}
