#pragma once

#include <string>
#include <vector>

namespace topex::cli {

/// Entry point of the `topex` executable. Returns the process exit code:
/// 0 success, 1 validation error, 2 I/O error, 3 internal invariant violation.
int run(int argc, char** argv);

/// Same, with argv[0] supplied internally. Used by tests.
int run(const std::vector<std::string>& args);

}  // namespace topex::cli
