#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relcat::cli {

/// Exit statuses shared by every subcommand.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

/// Runs the command line `args` (without the program name), writing reports
/// to `out` and diagnostics to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relcat::cli
