#include <iostream>
#include <string>
#include <vector>

#include "bht/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bht::run_command(args, std::cout, std::cerr);
}
