#pragma once

#include <string>
#include <vector>

namespace leafpress::cli {

// Runs one command-line invocation; `args` excludes the program name.
// Exit codes: 0 success (and all verifications passed), 1 estimator or
// model error, 2 verification failure, 3 configuration error.
int run(const std::vector<std::string>& args);

}  // namespace leafpress::cli
