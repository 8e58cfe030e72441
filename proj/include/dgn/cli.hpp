#pragma once
// Command-line front end: run, certify, compare, audit, gen-config.

#include <iosfwd>

namespace dgn {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitNotCertified = 4,
};

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dgn
