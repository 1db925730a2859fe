#include <iostream>

#include "drzero/cli.hpp"

int main(int argc, char** argv) {
  return drzero::run_cli(argc, argv, std::cout, std::cerr);
}
