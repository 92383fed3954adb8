#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sessions::cli {

// Runs `sessions <args...>` (without the program name). Returns the exit
// code: 0 ok, 1 semantic failure, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sessions::cli
