#include <iostream>

#include "duffmel/cli.hpp"

int main(int argc, char** argv) { return duffmel::run_cli(argc, argv, std::cout, std::cerr); }
