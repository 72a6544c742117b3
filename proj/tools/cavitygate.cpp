#include <iostream>

#include "cavitygate/commands.hpp"

int main(int argc, char** argv) { return cavitygate::run_cli(argc, argv, std::cout, std::cerr); }
