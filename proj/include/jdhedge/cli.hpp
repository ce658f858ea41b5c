#pragma once

#include <string>
#include <vector>

namespace jdhedge {

// Subcommands: simulate | hedge | tree | validate.
// Exit codes: 0 success, 1 validation failure, 2 usage/config error.
int run_cli(const std::vector<std::string>& args);

}  // namespace jdhedge
