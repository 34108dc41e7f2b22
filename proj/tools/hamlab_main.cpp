#include <iostream>

#include "hamlab/cli.hpp"

int main(int argc, char** argv) {
  return hamlab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
