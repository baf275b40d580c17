#pragma once

#include <iosfwd>

namespace delegation {

/// Exit codes of the delegate tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitValidation = 2,
  kExitIo = 3,
};

/// Entry point of the command-line tool with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace delegation
