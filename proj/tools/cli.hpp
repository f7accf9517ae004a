#pragma once

#include <iosfwd>

namespace rapidip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitConfig = 3;

/// Entry point of the `rapidip` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rapidip::cli
