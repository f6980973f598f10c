#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topicmine::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;     // I/O or source failure
inline constexpr int kExitUsage = 2;       // bad flags, invalid input files or config
inline constexpr int kExitPartial = 3;     // harvest finished but some accounts failed

// Runs `topicmine <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topicmine::cli
