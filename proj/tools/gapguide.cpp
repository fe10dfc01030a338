#include <iostream>

#include "gapguide/cli.hpp"

int main(int argc, char** argv) { return gapguide::cli::main(argc, argv, std::cout, std::cerr); }
