#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvop::cli {

enum ExitCode : int {
  kPass = 0,
  kCheckFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Entry point shared by the executable and the tests. Results go to the
/// --output file when given, otherwise to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvop::cli
