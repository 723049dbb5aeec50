#include <iostream>

#include "poems/cli.hpp"

int main(int argc, char** argv) { return poems::run_cli(argc, argv, std::cout, std::cerr); }
