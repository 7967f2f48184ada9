#pragma once

#include <string>
#include <vector>

namespace tvg::cli {

// Exit codes: 0 pass, 1 verification fail, 2 input error, 3 infeasible
// configuration.
int runCli(const std::vector<std::string>& args);

}  // namespace tvg::cli
