#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace archloom::cli {

/// Runs one invocation. `args` excludes the program name. Payload goes to
/// `out`, diagnostics to `err`. Exit codes: 0 success/clean, 1 warnings
/// (check) or non-canonical input (fmt), 2 errors, 3 usage or I/O failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace archloom::cli
