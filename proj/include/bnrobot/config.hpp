#pragma once

#include <string>

#include "bnrobot/harness.hpp"

namespace bnr {

// Config documents are JSON with three optional sections (arena, search,
// experiment); every field defaults to the stock design protocol, so an empty
// object {} is a valid config. Unknown keys are rejected with the offending
// name. A run manifest (format "bnrobot-manifest") is accepted anywhere a
// config is: its embedded config snapshot is used, which makes reruns exact.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// The resolved config as a JSON document (all fields explicit).
std::string serialize_experiment_config(const ExperimentConfig& cfg);

} // namespace bnr
