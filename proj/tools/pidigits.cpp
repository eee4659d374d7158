#include <iostream>

#include "pidigits/cli.hpp"

int main(int argc, char** argv) {
  return pidigits::cli::run(argc, argv, std::cout, std::cerr);
}
