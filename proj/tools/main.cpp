#include <iostream>
#include <string>
#include <vector>

#include "mthccar/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mthccar::run_cli(args, std::cout, std::cerr);
}
