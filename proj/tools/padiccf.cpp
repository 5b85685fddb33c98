#include <iostream>

#include "padiccf/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return padiccf::run_cli(args, std::cout, std::cerr);
}
