#include <iostream>

#include "wsnsync/cli.hpp"

int main(int argc, char** argv) {
  return wsnsync::run_cli(argc, argv, std::cout, std::cerr);
}
