#include <iostream>

#include "shapegeo/cli/cli.hpp"

int main(int argc, char** argv) { return shapegeo::cli::run_cli(argc, argv, std::cout, std::cerr); }
