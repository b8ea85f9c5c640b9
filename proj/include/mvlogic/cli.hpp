#pragma once

// The `mvlogic` command line, callable in-process for golden tests.

#include <ostream>
#include <string>
#include <vector>

namespace mvl {

/// `args` excludes the program name. Returns 0 on success (negative
/// verdicts included), 1 on malformed input or missing files, 2 on usage
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mvl
