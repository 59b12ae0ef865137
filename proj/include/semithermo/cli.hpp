#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semithermo {

/// Runs one subcommand. args excludes the program name. Returns 0 on
/// success, 1 on a module error (message on err) and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace semithermo
