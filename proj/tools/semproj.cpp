#include <iostream>
#include <string>
#include <vector>

#include "semproj/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semproj::cli::run(std::move(args), std::cout, std::cerr);
}
