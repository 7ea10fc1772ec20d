#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tudof::cli {

enum ExitCode : int { ok = 0, usage_or_input = 2, indeterminate = 3, oracle_mismatch = 4, verification_failed = 5 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tudof::cli
