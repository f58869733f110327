#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "arffklms/experiment.hpp"

namespace arffklms {

std::vector<std::string> preset_names();

/// Built-in experiments. Throws ConfigError for an unknown name.
ExperimentConfig preset(std::string_view name);

/// Parses and validates a JSON experiment description. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// JSON in the load_config schema. `output_dir` is omitted unless requested.
std::string config_to_json(const ExperimentConfig& cfg, bool include_output_dir = false);

/// Expands "xi=a:b:step" into a, a+step, ..., <= b.
std::vector<double> parse_xi_sweep(std::string_view text);

}  // namespace arffklms
