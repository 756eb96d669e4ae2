#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dtcns/config.hpp"
#include "dtcns/experiment.hpp"
#include "dtcns/td3.hpp"

namespace dtcns {

// JSON objects whose keys are the struct field names. Missing keys keep the
// value from `base`; unknown keys are a ConfigError.
SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base = {});
nlohmann::json to_json(const SimConfig& cfg);
Td3Config td3_config_from_json(const nlohmann::json& j, Td3Config base);
nlohmann::json to_json(const Td3Config& cfg);

/// Experiment file: {"sim": {...}, "scenarios": ["cooperative", "mixed-egocentric-3", ...],
/// "grid": [{"zeta": 0.1, "recovery_days": 5}, ...] or "resilience", "seeds": [...],
/// "k_values": [...], "output_dir", "policies_dir", "plots", "write_traces",
/// "random_placement", "jobs"}. "scenarios" also accepts the shorthands
/// "single" (all three styles) and "mixed" (both rider kinds over k_values).
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Training file: {"sim": {...}, "td3": {...}}.
struct TrainingFile {
  SimConfig sim;
  Td3Config td3;
};
TrainingFile training_config_from_json(const nlohmann::json& j, PolicyKind kind);

nlohmann::json read_json_file(const std::string& path);

/// Effective defaults as `key = value` lines in three sections:
/// [simulation], [td3.cooperative], [td3.egocentric].
void dump_defaults(std::ostream& out);

}  // namespace dtcns
