#include <string>
#include <vector>

#include "vortexline/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vortexline::cli_main(args);
}
