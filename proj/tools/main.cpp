#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  const auto r = kbranch::cli::run_args(argc, argv);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
