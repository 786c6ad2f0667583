#include <iostream>

#include "ftcollapse/cli.hpp"

int main(int argc, char** argv) { return ftcollapse::run_cli(argc, argv, std::cout, std::cerr); }
