#pragma once

#include <string>

#include "lazysched/experiment.hpp"

namespace lazysched {

// Full experiment description as read from a JSON config file.  Every
// field has a default matching the reference experiment setup, so an
// empty config (or no config at all) reproduces it.  Unknown keys are
// rejected; validation failures throw ConfigError naming the key.
struct CliConfig {
  ExperimentSpec spec;
};

CliConfig default_cli_config();

// Parses the JSON text; `source` labels error messages (file name).
CliConfig parse_cli_config(const std::string& json_text,
                           const std::string& source);

// Loads a config file; throws ConfigError for unreadable files.
CliConfig load_cli_config(const std::string& path);

}  // namespace lazysched
