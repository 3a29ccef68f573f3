#include "pmme/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pmme::run_cli(argc, argv, std::cout, std::cerr); }
