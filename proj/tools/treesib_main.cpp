#include <iostream>
#include <string>
#include <vector>

#include "treesib/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return treesib::run(args, std::cout, std::cerr);
}
