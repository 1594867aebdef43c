#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace conic::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInput = 2 };

/// Runs one command line (args exclude the program name).  Reports go to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace conic::cli
