#include <iostream>
#include <string>
#include <vector>

#include "homloc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return homloc::cli::run(args, std::cout, std::cerr);
}
