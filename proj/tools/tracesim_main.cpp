#include <iostream>
#include <vector>

#include "tracesim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tracesim::run_cli(args, std::cout, std::cerr);
}
