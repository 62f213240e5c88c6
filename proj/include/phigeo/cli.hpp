#pragma once

#include <ostream>
#include <span>
#include <string>

namespace phigeo::cli {

enum ExitCode : int {
  ok = 0,
  verify_failed = 1,
  usage = 2,
  infeasible = 3,
  non_convergence = 4,
};

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace phigeo::cli
