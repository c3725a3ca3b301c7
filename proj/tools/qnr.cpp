#include <iostream>
#include <string>
#include <vector>

#include "qnr/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qnr::cli::main_entry(args, std::cout, std::cerr);
}
