#pragma once

#include <ostream>

namespace viewforge {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitBudget = 3 };

/// Runs one command. Reports go to `out` (or to the file named by -o),
/// diagnostics to `err`. Subcommands: check, refine, verify, simulate, fmt.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace viewforge
