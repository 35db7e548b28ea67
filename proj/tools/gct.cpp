#include <iostream>

#include "gct/cli.hpp"

int main(int argc, char** argv) {
  return gct::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
