#include "cohres/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cohres::cli::run(argc, argv, std::cout, std::cerr); }
