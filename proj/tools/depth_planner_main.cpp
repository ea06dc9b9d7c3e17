#include <iostream>
#include <string>
#include <vector>

#include "depth_planner/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return depth::cli::run(args, std::cout, std::cerr);
}
