#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace formbound::cli {

enum ExitCode { pass = 0, check_failed = 1, usage = 2 };

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "2..5", "3,7" and plain integers, possibly repeated; order kept, duplicates dropped.
std::vector<int> parse_dimension_list(const std::vector<std::string>& items);

}  // namespace formbound::cli
