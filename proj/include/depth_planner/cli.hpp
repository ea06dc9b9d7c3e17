#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace depth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;

/// Environment variable naming a default config file.
inline constexpr const char* kConfigEnv = "DEPTH_PLANNER_CONFIG";

/// Runs one command line (`args` excludes the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err` as one line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace depth::cli
