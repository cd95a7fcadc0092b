#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qpower::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kConfigError = 2, kNoConvergence = 3 };

/// Runs the command line `qpower <args...>`; results go to `out` unless
/// --out names a file, diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpower::cli
