#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bootperc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;        // bad arguments, malformed or invalid input
inline constexpr int kNotExact = 3;     // --require-exact and the result is not Exact

// Runs one subcommand; JSON report on `out`, diagnostics on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bootperc::cli
