#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vortexlab/config.hpp"

namespace vortexlab::cli {

/// Exit codes of `run`.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Subcommands that make sense for a scenario, in a fixed order. Used to
/// replay the shipped figure configs.
std::vector<std::string> applicable_commands(const Scenario& sc);

}  // namespace vortexlab::cli
