#include <iostream>

#include "mfsplateau/cli.hpp"

int main(int argc, char** argv) { return mfsplateau::run_cli(argc, argv, std::cout, std::cerr); }
