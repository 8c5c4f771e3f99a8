#pragma once

#include <string>
#include <vector>

namespace covario {

// Exit codes: 0 all checks passed, 1 a requested check failed, 2 bad
// configuration or input.
int run_cli(const std::vector<std::string>& args);

} // namespace covario
