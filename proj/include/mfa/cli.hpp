#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mfa::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kBadInput = 2,
  kSolverBreakdown = 3,
};

/// Entry point behind the `mfa` executable; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfa::cli
