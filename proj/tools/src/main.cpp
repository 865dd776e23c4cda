#include <iostream>

#include "advinterp/cli/commands.hpp"

int main(int argc, char** argv) {
  return advinterp::cli::run_cli(argc, argv, std::cout, std::cerr);
}
