#include <iostream>
#include <string>
#include <vector>

#include "etaq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const etaq::cli::CommandResult r = etaq::cli::run(std::move(args));
  if (r.exit_code == 0)
    std::cout << r.payload;
  else
    std::cerr << r.payload;
  return r.exit_code;
}
