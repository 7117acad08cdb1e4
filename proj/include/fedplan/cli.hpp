#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace fedplan::cli {

enum ExitCode : int { kOk = 0, kDiagnostics = 1, kUsage = 2 };

/// Runs one command line (without the program name). Exit codes: 0 when no
/// error diagnostics, 1 when any, 2 for usage and I/O errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fedplan::cli
