#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powerarith::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUnknown = 2, kUsage = 64 };

/// args[0] is the program name. Records go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powerarith::cli
