#include <string>
#include <vector>

#include "spinsim/cli.hpp"

int main(int argc, char** argv) {
  return spinsim::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
