#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcnull {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs the command line (args exclude the program name). Results go to
/// `out`, diagnostics to `err`; stdin is read when the input path is "-".
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pcnull
