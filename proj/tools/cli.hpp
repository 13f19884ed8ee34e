#pragma once

// Command-line front end. All logic lives here so tests can drive the tool
// in-process; main.cpp only forwards argv.
//
// Exit codes: 0 success / PASS / PROVEN, 1 honest negative (FAIL, NOT PROVEN,
// budget exhausted), 2 usage or validation error.

#include <iosfwd>
#include <string>
#include <vector>

namespace sqavoid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory holding the shipped `paper/` and `desk/` certificate presets.
std::string default_config_dir();

} // namespace sqavoid::cli
