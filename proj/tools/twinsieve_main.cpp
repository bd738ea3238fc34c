#include <iostream>

#include "twinsieve/cli.hpp"

int main(int argc, char** argv) { return twinsieve::run_cli(argc, argv, std::cout, std::cerr); }
