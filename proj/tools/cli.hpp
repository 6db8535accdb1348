#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xychain::cli {

enum ExitCode : int {
  kSuccess = 0,
  kPropertyFailure = 1,
  kInputError = 2,
  kNumericalError = 3,
};

// Run the command line `args` (args[0] is the program name). Normal output
// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xychain::cli
