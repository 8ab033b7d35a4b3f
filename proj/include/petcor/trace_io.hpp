#pragma once

#include <string>
#include <vector>

#include "petcor/engine.hpp"

namespace petcor {

struct OutputOptions {
    bool plots = false;
};

/// Writes trace.csv, events_net.csv, and events_sensor.csv into `dir`
/// (created if missing), plus outputs.svg / events.svg / errors.svg when
/// plots are requested. Numbers are printed with 17 significant digits so a
/// re-read reproduces the series exactly. Returns the paths written.
std::vector<std::string> emit_outputs(const SimTrace& trace, const std::string& dir,
                                      const OutputOptions& opts = {});

}  // namespace petcor
