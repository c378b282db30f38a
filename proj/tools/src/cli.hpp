#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vanhove::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the tool on argv-style arguments (args[0] is the program name) and
/// returns the exit status. Human-readable output goes to `out`, structured
/// error lines to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vanhove::cli
