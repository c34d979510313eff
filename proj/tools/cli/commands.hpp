#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svmreg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

/// Entry point behind the `svmreg` executable. `args` excludes the program name.
/// Reports go to --out (written atomically) or, when absent, to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svmreg::cli
