#pragma once

#include <filesystem>
#include <string>

#include "remoteness/index.hpp"

namespace remoteness {

// JSON mirror of RunConfig; every field optional, unknown keys are an error.
// `weights` accepts "equal", "ascending", or an inline scheme object.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text);

// Weight scheme file: {"name": ..., "w_pop": ..., "w_pc": [five numbers]}.
WeightScheme load_weight_scheme(const std::filesystem::path& path);
WeightScheme parse_weight_scheme(const std::string& json_text);

// Fully resolved config as JSON (used by the run manifest).
std::string config_to_json(const RunConfig& config);

}  // namespace remoteness
