#include <iostream>

#include "typicality/cli.hpp"

int main(int argc, char** argv) {
  return typicality::cli::main_entry(argc, argv, std::cout, std::cerr);
}
