#include <iostream>

#include "dgn/cli.hpp"

int main(int argc, char** argv) { return dgn::cli_main(argc, argv, std::cout, std::cerr); }
