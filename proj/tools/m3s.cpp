#include <string>
#include <vector>

#include "m3s/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return m3s::cli::run(args);
}
