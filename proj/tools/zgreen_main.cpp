#include <vector>

#include "zgreen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zgreen::run_cli(args);
}
