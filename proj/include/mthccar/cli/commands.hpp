#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mthccar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Subcommands: gen-data,
/// train, eval, ablate, kfold, select. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mthccar
