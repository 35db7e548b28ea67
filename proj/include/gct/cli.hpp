#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gct::cli {

/// Exit codes of the `gct` tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadManifest = 2,
  kMissingData = 3,
  kBadConfig = 4,
  kLayoutMismatch = 5,
};

/// Runs one `gct` invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gct::cli
