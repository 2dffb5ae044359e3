#include <string>
#include <vector>

#include "vpd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vpd::run_cli(args);
}
