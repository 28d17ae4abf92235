#include <iostream>

#include "crossroad/cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = crossroad::parse_args(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == crossroad::kExitOk ? std::cout : std::cerr) << parsed.message;
    return parsed.exit_code;
  }
  return crossroad::run(*parsed.config);
}
