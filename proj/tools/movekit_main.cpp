#include <iostream>
#include <string>
#include <vector>

#include "movekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << movekit::cli::usage();
    return 2;
  }
  return movekit::cli::run(args, std::cout, std::cerr);
}
