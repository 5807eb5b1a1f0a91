#pragma once

#include <iosfwd>

namespace biphoton::cli {

enum ExitCode : int { ok = 0, config_error = 2, numeric_failure = 3 };

/// Parses and runs one subcommand. Output goes to `out` unless -o is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biphoton::cli
