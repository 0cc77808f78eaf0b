#pragma once

#include <string>
#include <vector>

namespace fjet::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one command line. Returns the process exit code: 0 on success,
/// 1 on runtime failure, 2 on a configuration error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace fjet::cli
