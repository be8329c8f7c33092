#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bondkit::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitMethodMismatch = 3;
inline constexpr int kExitCheckFailed = 4;
inline constexpr int kExitUnstable = 5;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bondkit::cli
