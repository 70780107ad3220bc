#include <iostream>

#include "mosob/cli.hpp"

int main(int argc, char** argv) { return mosob::run_cli(argc, argv, std::cout, std::cerr); }
