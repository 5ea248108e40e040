#include <iostream>
#include <string>
#include <vector>

#include "perc/cli.hpp"

int main(int argc, char** argv) {
  return perc::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
