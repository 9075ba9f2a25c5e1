#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "strategem/experiment.hpp"

namespace strategem {

/// Reads an INI-style config with [sim] and [batch] sections whose keys are
/// the SimConfig / BatchConfig field names. Missing keys keep their
/// defaults; unknown sections or keys raise ConfigError.
BatchConfig parse_config(std::istream& is);
BatchConfig load_config(const std::filesystem::path& path);

/// Sets one field from text. `key` is "section.name" or a bare name that is
/// unique across sections.
void apply_setting(BatchConfig& cfg, const std::string& key, const std::string& value);

/// The full effective configuration in the same format parse_config reads.
std::string to_ini(const BatchConfig& cfg);

/// All recognised "section.name" keys, in output order.
std::vector<std::string> config_keys();

}  // namespace strategem
