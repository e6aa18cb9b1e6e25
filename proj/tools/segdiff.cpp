#include <iostream>

#include "segdiff/cli.hpp"

int main(int argc, char** argv) { return segdiff::cli::run(argc, argv, std::cout, std::cerr); }
