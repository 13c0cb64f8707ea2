#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace omicsprep::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kError = 1,         ///< usage, I/O, parse or operation error
  kFlaggedCells = 3,  ///< simulate: some cell had > 1% failed fits
};

/// Runs one invocation. `args` excludes the program name. Data goes to
/// files only; help text goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omicsprep::cli
