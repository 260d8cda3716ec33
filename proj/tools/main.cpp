#include "modeda/cli.hpp"

int main(int argc, char** argv) {
  return modeda::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
