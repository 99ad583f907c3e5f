#include <iostream>
#include <string>
#include <vector>

#include "hijackmap/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hijackmap::cli::run_cli(args, std::cout, std::cerr);
}
