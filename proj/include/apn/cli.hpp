#pragma once

// Command-line front end shared by the apn_tool binary and the CLI tests.

#include <iosfwd>
#include <string>
#include <vector>

namespace apn {

// Exit codes.
inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apn
