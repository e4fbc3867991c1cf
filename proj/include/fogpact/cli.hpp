#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fogpact/solver.hpp"

namespace fogpact::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,   // bad flags, bad config, invalid instance, I/O
  kSolver = 3,  // solver failure, invalid perturbation
  kOverflow = 4,
};

/// Entry point shared by the fogpact binary and the tests. `args` excludes
/// the program name. Errors are reported on `err` as one line starting with
/// "error:".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Key/value report printed by `fogpact solve`.
std::string format_report(const SolveReport& report);

}  // namespace fogpact::cli
