#include "twotls/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return twotls::cli::run(argc, argv, std::cout, std::cerr); }
