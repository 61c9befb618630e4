#include <iostream>

#include "rohoi/cli/cli.hpp"

int main(int argc, char** argv) { return rohoi::cli::run_cli(argc, argv, std::cout, std::cerr); }
