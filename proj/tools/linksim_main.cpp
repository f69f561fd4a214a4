#include <iostream>
#include <string>
#include <vector>

#include "linksim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return linksim::run_cli(args, std::cout, std::cerr);
}
