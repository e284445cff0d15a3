#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mermin::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one command line (without the program name). Subcommands: table,
/// bound, realize, simulate, coin, audit. "--config file.json" supplies flags
/// from a JSON object; flags given on the command line take precedence.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mermin::cli
