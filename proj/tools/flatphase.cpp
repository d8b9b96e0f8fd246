#include <iostream>

#include "flatphase/cli.hpp"

int main(int argc, char** argv) { return flatphase::run_cli(argc, argv, std::cout, std::cerr); }
