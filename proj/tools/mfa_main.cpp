#include <iostream>
#include <string>
#include <vector>

#include "mfa/cli.hpp"

int main(int argc, char** argv) {
  return mfa::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
