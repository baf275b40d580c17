#include <iostream>

#include "delegation/cli.hpp"

int main(int argc, char** argv) { return delegation::run_cli(argc, argv, std::cout, std::cerr); }
