#include <iostream>
#include <string>
#include <vector>

#include "coderoute/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coderoute::run_command(args, std::cout, std::cerr);
}
