#include <string>
#include <vector>

#include "tvg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tvg::cli::runCli(args);
}
