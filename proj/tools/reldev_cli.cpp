#include <iostream>

#include "reldev/cli.hpp"

int main(int argc, char** argv) { return reldev::run_cli(argc, argv, std::cout, std::cerr); }
