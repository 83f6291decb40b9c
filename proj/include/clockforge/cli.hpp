#pragma once

#include <iosfwd>

namespace clockforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Subcommands: generate, read, calibrate, evaluate, plot, demo.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clockforge
