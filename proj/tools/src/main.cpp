#include <iostream>
#include <string>
#include <vector>

#include "wreath_cli/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<std::string> args(argv, argv + argc);
  return wreath::cli::run(args, std::cout, std::cerr);
}
