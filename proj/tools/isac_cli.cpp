#include <iostream>

#include "isac/cli.hpp"

int main(int argc, char** argv) { return isac::cli::main(argc, argv, std::cout, std::cerr); }
