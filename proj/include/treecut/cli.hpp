#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecut {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInput = 2 };

// Runs `treecut <subcommand> [flags]` with args excluding the program name.
// Reads `-` inputs from `in`, writes JSON to `out` (or --output) and
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace treecut
