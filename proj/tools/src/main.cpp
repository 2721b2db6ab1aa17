#include <iostream>

#include "dpplimits/cli.hpp"

int main(int argc, char** argv) {
  return dpplimits::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
