#pragma once

// Command-line front end. `run` takes the arguments after the program name
// so tests can drive it without spawning a process.

#include <ostream>
#include <span>
#include <string>

namespace fran::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kConstraintViolation = 3,
};

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fran::cli
