#include <iostream>

#include "elliptica/cli/commands.hpp"

int main(int argc, char** argv) { return elliptica::cli::main_entry(argc, argv, std::cout, std::cerr); }
