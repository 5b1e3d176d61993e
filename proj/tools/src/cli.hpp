#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coevo::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kNumericalError = 3 };

/// Entry point shared by the binary and the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coevo::cli
