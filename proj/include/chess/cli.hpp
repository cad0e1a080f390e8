#pragma once

// Command-line front end. Subcommands: solve, mms, props, identity.
// Exit codes: 0 success, 1 usage or I/O error, 2 mathematical failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace chess {

inline constexpr const char* kVersion = "0.1.0";

/// args excludes the program name, e.g. {"mms", "--n", "2", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chess
