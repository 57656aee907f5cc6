#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrce::cli {

/// Runs one command line (without the program name). Returns the process exit status:
/// 0 success, 2 config or validation error, 3 no active equilibrium, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lrce::cli
