#include <iostream>

#include "bondkit_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bondkit::cli::run(args, std::cout, std::cerr);
}
