#pragma once

#include <string>
#include <vector>

#include "petcor/engine.hpp"

namespace petcor {

struct LoadedConfig {
    std::string name;
    std::string description;
    Scenario scenario;
};

/// Parses and validates a scenario from JSON text. Unknown keys are rejected;
/// every error carries the offending field path. `origin` names the source in
/// error messages.
LoadedConfig parse_config(const std::string& json_text, const std::string& origin = "<memory>");

/// Reads a scenario file from disk. If `path` is not an existing file but
/// matches a preset name, the embedded preset is loaded instead.
LoadedConfig load_config(const std::string& path);

/// Names of the scenario presets compiled into the library.
std::vector<std::string> preset_names();

/// Raw JSON text of one embedded preset.
std::string preset_text(const std::string& name);

LoadedConfig load_preset(const std::string& name);

}  // namespace petcor
