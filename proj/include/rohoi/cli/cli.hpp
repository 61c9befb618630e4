#pragma once

#include <ostream>

namespace rohoi::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

// Entry point behind the `rohoi` executable. Subcommands: corrupt, mask,
// evaluate, report, curriculum-sim.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rohoi::cli
