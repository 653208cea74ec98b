#include "garima/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return garima::run_cli(argc, argv, std::cout, std::cerr); }
