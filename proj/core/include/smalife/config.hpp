#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smalife/harness.hpp"

namespace smalife {

/// Trial parameters plus the sweep grids. Loaded from a nested JSON document;
/// every key is optional and falls back to the built-in value.
struct SweepConfig {
  TrialConfig base;
  std::vector<double> c1_t_sets{118, 130, 140, 150, 162, 175, 200, 230};
  std::vector<double> c2_t_sets{118, 130, 140, 150, 200, 230};

  std::vector<SweepCell> cells() const { return make_cells(c1_t_sets, c2_t_sets); }
};

/// Throws ParseError (with line) for malformed JSON and ConfigError for values
/// that fail validation.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::filesystem::path& path);

std::string dump_config(const SweepConfig& cfg);

/// The shipped configs/default.json, compiled in.
std::string_view default_config_text();
SweepConfig default_config();

using FlatConfig = std::vector<std::pair<std::string, std::string>>;

/// Dotted key=value form of a trial config, in a fixed order. Used as the CSV
/// metadata header and for hashing.
FlatConfig flatten(const TrialConfig& cfg);
TrialConfig unflatten(const FlatConfig& flat);

/// 16 hex digits of FNV-1a over the flattened config.
std::string config_hash(const TrialConfig& cfg);

}  // namespace smalife
