#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvkey::cli {

// Parses and executes one CLI invocation; CSV goes to `out`, human-readable
// summaries and diagnostics to `err`.  Returns the process exit code:
// 0 success, 2 configuration error, 3 numerical-consistency error,
// 4 "no key" from a boundary solver.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace cvkey::cli
