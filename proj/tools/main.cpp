#include <iostream>

#include "hypercount/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hypercount::cli::run(args, std::cout, std::cerr);
}
