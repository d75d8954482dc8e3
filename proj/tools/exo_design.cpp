#include <iostream>
#include <string>
#include <vector>

#include "exo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return exo::cli::dispatch(args, std::cout, std::cerr);
}
