#pragma once

#include <ostream>

namespace crossplace {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitPrecision = 4;
inline constexpr int kExitIdentity = 5;

/// Entry point of the `crossplace` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace crossplace
