#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nestedot::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInput = 2,
  kExitShape = 3,
  kExitMath = 4,
};

// Entry point of the `nestedot` tool, usable in-process. `args` excludes
// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nestedot::cli
