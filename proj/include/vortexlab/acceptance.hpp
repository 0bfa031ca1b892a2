#pragma once

#include <ostream>
#include <string>

namespace vortexlab {

/// Runs every acceptance criterion and prints one PASS/FAIL line each.
/// Timings are appended only when `show_timing` is set, so the output of a
/// run without them is reproducible byte for byte. Returns the number of
/// failed criteria.
int run_acceptance(std::ostream& out, bool show_timing);

/// Directory holding the shipped figure configs.
std::string config_dir();

}  // namespace vortexlab
