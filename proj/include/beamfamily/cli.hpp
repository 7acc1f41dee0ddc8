#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace beamfamily::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kOk = 0,
    kVerifyMismatch = 1,
    kBadInput = 2,
    kSolverFailure = 3,
    kDegenerateEndpoints = 4,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beamfamily::cli
