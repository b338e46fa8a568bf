#include <iostream>

#include "caputo/cli/cli.hpp"

int main(int argc, char** argv) { return caputo::cli::run(argc, argv, std::cout, std::cerr); }
