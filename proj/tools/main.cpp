#include <iostream>

#include "mahler/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = mahler::cli::run(args);
  std::ostream& out = result.exit_code == 0 ? std::cout : std::cerr;
  if (result.json) {
    std::cout << mahler::cli::render_json(result);
  } else {
    out << mahler::cli::render_text(result);
  }
  return result.exit_code;
}
