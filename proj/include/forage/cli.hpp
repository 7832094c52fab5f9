#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace forage::cli {

/// Exit status: 0 success, 1 invalid input (arguments, config, overrides),
/// 2 runtime failure (numerical blow-up, I/O, malformed frame or checkpoint).
enum ExitCode : int { kOk = 0, kInvalid = 1, kRuntime = 2 };

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forage::cli
