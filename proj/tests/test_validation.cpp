#include <doctest.h>

#include "smalife/config.hpp"
#include "smalife/error.hpp"
#include "smalife/validation.hpp"

using namespace smalife;

namespace {
ValidationConfig defaults() {
  ValidationConfig vc;
  vc.base = default_config().base;
  return vc;
}
}  // namespace

TEST_CASE("high-temperature specimen keeps at most 0.6 of the low-temperature force") {
  const ValidationReport r = run_validation(defaults());
  CHECK(r.ratio <= 0.6);
  CHECK(r.ratio == doctest::Approx(0.37 / 0.70).epsilon(0.02));
  CHECK(r.low.d_final == doctest::Approx(0.70).epsilon(0.01));
  CHECK(r.high.d_final == doctest::Approx(0.37).epsilon(0.01));
  CHECK(r.low.recycle_cycles == 50);
  CHECK(r.high.mean_recycle_fmax < r.low.mean_recycle_fmax);
}

TEST_CASE("equal temperatures give ratio 1") {
  ValidationConfig vc = defaults();
  vc.t_high = vc.t_low;
  vc.cycles = 20;
  CHECK(run_validation(vc).ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero cycles compares two fresh specimens") {
  ValidationConfig vc = defaults();
  vc.cycles = 0;
  const ValidationReport r = run_validation(vc);
  CHECK(r.ratio == 1.0);
  CHECK(r.low.d_final == 1.0);
}

TEST_CASE("negative cycle counts are rejected") {
  ValidationConfig vc = defaults();
  vc.cycles = -1;
  CHECK_THROWS_AS(run_validation(vc), ConfigError);
}
