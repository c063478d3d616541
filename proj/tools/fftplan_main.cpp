#include <iostream>

#include "fftplan/cli.hpp"

int main(int argc, char** argv) { return fftplan::cli::run(argc, argv, std::cout, std::cerr); }
