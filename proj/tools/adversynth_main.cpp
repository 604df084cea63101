#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adversynth::cli::run_cli("adversynth", std::move(args), std::cout, std::cerr);
}
