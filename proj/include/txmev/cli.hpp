#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace txmev {

/// Entry point of the txmev command line. `args` excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace txmev
