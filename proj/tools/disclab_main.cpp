#include <iostream>
#include <string>
#include <vector>

#include "disclab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return disclab::run_cli(std::move(args), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return disclab::cli_exit::kInternalError;
  }
}
