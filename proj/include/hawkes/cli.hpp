#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hawkes {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitViolation = 3;
inline constexpr int kExitUsage = 64;

/// Entry point shared by the hawkes-cli binary and the tests. args[0] is the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace hawkes
