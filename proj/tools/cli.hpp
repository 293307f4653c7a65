#pragma once

#include <iosfwd>

namespace gtcurate::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Entry point for the `gtcurate` binary. Machine-readable output goes to
/// `out` (or --out files), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtcurate::cli
