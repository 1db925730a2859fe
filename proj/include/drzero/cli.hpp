#pragma once

#include <iosfwd>

namespace drzero {

/// Entry point shared by the command-line binary and the tests. Parses argv,
/// dispatches to the subcommand, writes the primary payload to `out` (or the
/// --output path) and machine-readable errors to `err`.
///
/// Exit codes: 0 success, 1 domain/validation error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drzero
