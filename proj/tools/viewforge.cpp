#include <iostream>

#include "viewforge/cli.hpp"

int main(int argc, char** argv) { return viewforge::run_cli(argc, argv, std::cout, std::cerr); }
