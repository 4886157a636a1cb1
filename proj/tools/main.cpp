#include <iostream>

#include "cvxtomo/cli.hpp"

int main(int argc, char** argv) { return cvxtomo::cli::main_entry(argc, argv, std::cout, std::cerr); }
