#pragma once

#include <iosfwd>

namespace lpcoreset {

/// Exit codes: 0 success, 1 solver failure, 2 bad input or guard violation.
enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitBadInput = 2 };

/// Entry point for the `solve` and `experiment` subcommands. Reports go to
/// `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpcoreset
