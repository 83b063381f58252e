#include <iostream>

#include "argus/cli.hpp"

int main(int argc, char** argv) { return argus::cli::run(argc, argv, std::cout, std::cerr); }
