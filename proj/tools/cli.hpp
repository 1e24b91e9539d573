#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irsim::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kUsageError = 2,
  kValidationFailed = 3,
  kNumericalFailure = 4,
};

/// Environment variable consulted for the output directory when
/// --out-dir is not given.
inline constexpr const char* kOutDirEnv = "IRSIM_OUT_DIR";

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irsim::cli
