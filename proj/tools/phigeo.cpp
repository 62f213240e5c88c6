#include <iostream>
#include <string>
#include <vector>

#include "phigeo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return phigeo::cli::run(args, std::cout, std::cerr);
}
