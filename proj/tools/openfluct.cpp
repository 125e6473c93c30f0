#include <iostream>

#include "openfluct/cli.hpp"

int main(int argc, char** argv) {
  return openfluct::cli::main(argc, argv, std::cout, std::cerr);
}
