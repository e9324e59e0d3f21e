#include <iostream>

#include "whf/cli.hpp"

int main(int argc, char** argv) { return whf::run_cli(argc, argv, std::cout, std::cerr); }
