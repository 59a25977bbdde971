#include <iostream>

#include "uplab/cli.hpp"

int main(int argc, char** argv) { return uplab::cli::run(argc, argv, std::cout, std::cerr); }
