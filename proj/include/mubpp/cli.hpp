#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mubpp::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dimensions used by `fig1` when no --n-list is given.
std::vector<unsigned> default_fig1_dims();

}  // namespace mubpp::cli
