#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coalab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numeric = 1;
inline constexpr int exit_usage = 2;

/// Runs one command line (arguments without the program name), writing
/// results to out and messages to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace coalab::cli
