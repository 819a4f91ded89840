#include <iostream>
#include <string>
#include <vector>

#include "pgsynth/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pgsynth::cli_run(args, std::cout, std::cerr);
}
