#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace owlreg {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kInfeasible = 3,
  kViolation = 4,
};

/// Runs the owlreg command line with `args` (program name excluded), writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace owlreg
