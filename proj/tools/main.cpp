#include <iostream>
#include <string>
#include <vector>

#include "mssp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mssp::run_cli(args, std::cout, std::cerr);
}
