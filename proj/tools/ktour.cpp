#include <iostream>
#include <string>
#include <vector>

#include "ktour/commands.hpp"

int main(int argc, char** argv) {
  return ktour::run_cli(std::vector<std::string>(argv + 1, argv + argc),
                        std::cout, std::cerr);
}
