#include <iostream>
#include <string>
#include <vector>

#include "skolem/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return skolem::run_cli(args, std::cout, std::cerr);
}
