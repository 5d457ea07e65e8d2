#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace agm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitInvalidField = 2;
inline constexpr int kExitBoundExceeded = 3;
inline constexpr int kExitInvalidVertex = 4;
inline constexpr int kExitNoSequence = 5;

/// Runs the command line `args` (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agm::cli
