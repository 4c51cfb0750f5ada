#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "smalife/config.hpp"
#include "smalife/error.hpp"

using namespace smalife;

TEST_CASE("shipped default config matches the file on disk") {
  std::ifstream in(std::filesystem::path(SMALIFE_CONFIG_DIR) / "default.json");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == std::string(default_config_text()));
}

TEST_CASE("default config values") {
  const SweepConfig cfg = default_config();
  const TrialConfig& t = cfg.base;
  CHECK(t.thermal.alpha1 == -0.079);
  CHECK(t.thermal.alpha2 == 29.22);
  CHECK(t.thermal.t_amb == 35.16);
  CHECK(t.gamma == 0.15);
  CHECK(t.v_max == 100);
  CHECK(t.c1.t_cool == doctest::Approx(36.16));
  CHECK(t.c1.duty == 0.6);
  CHECK(t.c2.duty == 0.5);
  CHECK(t.fatigue.t_knee == 175.0);
  CHECK(cfg.c1_t_sets.size() == 8);
  CHECK(cfg.c2_t_sets.size() == 6);
  CHECK(cfg.cells().size() == 14);
  CHECK_FALSE(t.supervisor_model.has_value());
}

TEST_CASE("missing keys fall back to built-in values") {
  const SweepConfig cfg = parse_config("{\"supervisor\": {\"t_set\": 150}}");
  CHECK(cfg.base.t_set == 150.0);
  CHECK(cfg.base.gamma == 0.15);
  CHECK(cfg.base.c1.t_cool == doctest::Approx(36.16));
}

TEST_CASE("explicit t_cool and supervisor model") {
  const SweepConfig cfg = parse_config(R"({"c1": {"t_cool": 35}, "supervisor": {"model": {"alpha1": -0.08}}})");
  CHECK(cfg.base.c1.t_cool == 35.0);
  REQUIRE(cfg.base.supervisor_model.has_value());
  CHECK(cfg.base.supervisor_model->alpha1 == -0.08);
  CHECK(cfg.base.supervisor_model->alpha2 == 29.22);
}

TEST_CASE("malformed JSON reports a line") {
  try {
    parse_config("{\n  \"trial\": {\n    \"dt\": ,\n  }\n}");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("invalid values are config errors") {
  CHECK_THROWS_AS(parse_config(R"({"supervisor": {"gamma": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"thermal": {"alpha1": 0.1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"c1": {"t_cool": "cold"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trial": {"dt": "fast"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("dump and parse round trip") {
  const SweepConfig a = default_config();
  const SweepConfig b = parse_config(dump_config(a));
  CHECK(flatten(a.base) == flatten(b.base));
  CHECK(a.c1_t_sets == b.c1_t_sets);
  CHECK(a.c2_t_sets == b.c2_t_sets);
}

TEST_CASE("flatten and unflatten are inverse; unknown keys are rejected") {
  TrialConfig t = default_config().base;
  t.label = "x";
  t.supervisor_model = ThermalParams{-0.07, 30.0, 30.0, 0.2};
  CHECK(flatten(unflatten(flatten(t))) == flatten(t));
  FlatConfig bad = flatten(t);
  bad.emplace_back("mystery", "1");
  CHECK_THROWS_AS(unflatten(bad), ConfigError);
}

TEST_CASE("config hash tracks every field") {
  TrialConfig a = default_config().base;
  TrialConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.fatigue.eta = 6e-5;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.noise.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
}
