#include <iostream>

#include "lvharvest/cli.hpp"

int main(int argc, char** argv) { return lvharvest::run_cli(argc, argv, std::cout, std::cerr); }
