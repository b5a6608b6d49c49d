#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcs/engine.hpp"
#include "mcs/scenario.hpp"

namespace mcs {

// Sweep over one scenario axis; each value is its own experiment.
struct Sweep {
  std::string axis;  // "K" or "Z", empty for none
  std::vector<int> values;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  StrategyParams params;
  std::uint64_t seed = 1;
  int runs = 20;
  int steps = 5000;
  int window = 100;
  std::vector<std::string> strategies = strategy_names();
  Sweep sweep;

  void validate() const;
};

// Desk-scale profile: I=2, K=20, 20 tasks, Z=5, T=5000, 20 runs.
ExperimentConfig desk_profile();
// Full-scale profile: K=50, 50 tasks, T=10000, 100 runs.
ExperimentConfig full_profile();

// JSON text to config. Keys missing from the document keep the desk
// defaults; unknown keys and wrong types throw ConfigError naming the
// dotted key path. `overrides` are "a.b=value" strings applied on top,
// the value parsed as JSON when it parses and as a string otherwise.
ExperimentConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Canonical JSON for a config (sorted keys, every field present).
std::string config_to_json(const ExperimentConfig& cfg);

// FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

Sweep parse_sweep(const std::string& spec);  // "K=50,100"

// Copy of `base` with the sweep axis set to `value`.
ExperimentConfig with_axis(const ExperimentConfig& base, const std::string& axis, int value);

}  // namespace mcs
