#include <iostream>

#include "arrowc/cli.hpp"

int main(int argc, char** argv) { return arrowc::run_cli(argc, argv, std::cout, std::cerr); }
