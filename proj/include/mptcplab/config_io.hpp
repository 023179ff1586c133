#pragma once

#include <optional>
#include <string>

#include "mptcplab/experiment.hpp"

namespace mptcplab {

/// Parse an experiment configuration from a JSON document. Every field of
/// ExperimentConfig must be present and no unknown key is tolerated
/// (fail-closed); violations raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);

/// Load from a file path. Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Serialize with stable key order, suitable for round-tripping.
std::string config_to_json(const ExperimentConfig& cfg);

void save_config(const ExperimentConfig& cfg, const std::string& path);

/// Seed resolution: an explicit CLI seed wins, else the MPTCP_LAB_SEED
/// environment variable when set (ConfigError if unparsable), else the seed
/// already in the config.
void apply_seed_overrides(ExperimentConfig& cfg,
                          std::optional<std::uint64_t> cli_seed);

}  // namespace mptcplab
