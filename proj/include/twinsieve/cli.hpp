#pragma once

#include <iosfwd>
#include <string>

#include "twinsieve/zeta.hpp"

namespace twinsieve {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvariant = 2,
  kExitNumericalFlag = 3,
  kExitUsage = 64,
};

// Parses "2", "2+0i", "1.2+5i", "3-7i", "-i" and similar. Throws DomainError.
Complex parse_complex(const std::string& text);

// Full CLI: subcommand dispatch, output to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twinsieve
