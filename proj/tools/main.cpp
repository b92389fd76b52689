#include <iostream>
#include <string>
#include <vector>

#include "runner.hpp"

int main(int argc, char** argv) {
  return holo::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
