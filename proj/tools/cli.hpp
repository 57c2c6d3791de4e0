#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpv::cli {

/// Exit codes of every subcommand.
enum ExitCode : int { kAffirmative = 0, kNegative = 1, kUsage = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and usage text to `err`; `in` backs the `-` file argument.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace rpv::cli
