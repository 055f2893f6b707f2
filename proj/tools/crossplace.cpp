#include <iostream>

#include "crossplace/cli.hpp"

int main(int argc, char** argv) { return crossplace::run_cli(argc, argv, std::cout, std::cerr); }
