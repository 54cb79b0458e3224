#pragma once

#include <ostream>

namespace bosonic::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kConfigError = 2, kGuardViolation = 3, kBudgetExceeded = 4 };

// Full command line front-end; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bosonic::cli
