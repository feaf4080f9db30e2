#pragma once

#include <string>
#include <vector>

namespace wpme {

// Entry point shared by the wpme binary and the CLI tests. Returns the
// process exit status: 0 computed, 1 error, 2 inconclusive verdict.
int run_cli(std::vector<std::string> args);

} // namespace wpme
