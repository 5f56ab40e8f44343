#include <iostream>

#include "kaft/cli.hpp"

int main(int argc, char** argv) { return kaft::cli::main(argc, argv, std::cout, std::cerr); }
