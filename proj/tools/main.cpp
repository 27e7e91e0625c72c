#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return swstab::cli::run_cli(args, std::cout, std::cerr, swstab::cli::environment_from_process());
}
