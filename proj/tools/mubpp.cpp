#include <iostream>
#include <string>
#include <vector>

#include "mubpp/cli.hpp"

int main(int argc, char** argv) {
  return mubpp::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
