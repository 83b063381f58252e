#pragma once

#include <ostream>

namespace argus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDegenerate = 2;

// argus replay|fit|evaluate|simulate|serve. Returns the process exit code:
// 1 for bad arguments, unreadable files or schema violations, 2 when an
// update degenerates (the message names the timestep).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace argus::cli
