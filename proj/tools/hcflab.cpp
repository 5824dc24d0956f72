#include <iostream>

#include "hcf/cli.hpp"

int main(int argc, char** argv) { return hcf::run_cli(argc, argv, std::cout, std::cerr); }
