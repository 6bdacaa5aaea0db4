// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskcr {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNoConvergence = 3,
  kExitIo = 4,
  kExitSimMismatch = 5,
};

/// Runs the command line given argv-style arguments (without the program
/// name), writing reports to `out` and diagnostics to `err`.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv adapter for main().
int cli_main(int argc, char** argv);

}  // namespace riskcr
