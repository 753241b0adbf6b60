#include <iostream>

#include "arbfree/cli.hpp"

int main(int argc, char** argv) { return arbfree::run_cli(argc, argv, std::cout, std::cerr); }
