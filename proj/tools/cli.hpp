#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace memoria::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command line (args excludes the program name). REPL input is read
/// from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace memoria::cli
