#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streak::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;      // bad flags or invalid input data
inline constexpr int kExitCap = 3;        // enumeration cap exceeded
inline constexpr int kExitNumerical = 4;  // probability outside [-1e-12, 1 + 1e-12]

/// Runs `streak <args...>` (args excludes the program name). CSV results go
/// to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streak::cli
