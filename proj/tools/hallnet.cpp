#include <iostream>

#include "hallnet/cli.hpp"

int main(int argc, char** argv) { return hallnet::cli::run(argc, argv, std::cout, std::cerr); }
