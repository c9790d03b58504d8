#include <iostream>
#include <string>
#include <vector>

#include "gkt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gkt::run_cli(args, std::cout, std::cerr);
}
