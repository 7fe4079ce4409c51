#include <iostream>
#include <vector>

#include "cuspedge/cli.hpp"

int main(int argc, char** argv) {
  return cuspedge::run_cli(std::vector<std::string>(argv + 1, argv + argc),
                           std::cout, std::cerr);
}
