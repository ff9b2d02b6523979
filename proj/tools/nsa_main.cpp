#include "nsa/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  nsa::cli::CommandResult result = nsa::cli::run(args);
  std::cout << result.output;
  std::cerr << result.diagnostics;
  return nsa::cli::exit_code(result.status);
}
