#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wreath::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCap = 4;

/// Runs one command line. args[0] is the program name. Results named "-"
/// (the default for --out) go to `out`; the human summary goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wreath::cli
