#include <iostream>

#include "fora/cli.hpp"

int main(int argc, char** argv) {
  return fora::run_cli(argc, argv, std::cout, std::cerr);
}
