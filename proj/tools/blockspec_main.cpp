#include <iostream>

#include "blockspec/cli.hpp"

int main(int argc, char** argv) { return blockspec::main_entry(argc, argv, std::cout, std::cerr); }
