#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace equibench::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBadId = 2,
  kExitIo = 3,
  kExitParse = 4,
  kExitPartial = 5,
};

/// Runs one command line (without the program name) and returns the exit
/// code. All console output goes to `out` and `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Identifier shared by every file of one run: a hash of the config snapshot,
/// which already contains the seed.
std::string run_id(std::string_view snapshot);

}  // namespace equibench::cli
