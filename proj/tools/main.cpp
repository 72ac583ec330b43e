// Copyright 2026 The awse Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return awse::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
