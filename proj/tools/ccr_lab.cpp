#include <iostream>

#include "ccrlab/cli.hpp"

int main(int argc, char** argv) { return ccrlab::cli::run(argc, argv, std::cout, std::cerr); }
