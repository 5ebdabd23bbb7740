#pragma once

#include <ostream>

namespace floquetlab::cli {

/// Exit codes of the command-line driver.
enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kUsage = 2,
  kResource = 3,
  kTolerance = 4,
};

/// Entry point shared by main() and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace floquetlab::cli
