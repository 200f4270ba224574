#include "vtg/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vtg::cli::run(argc, argv, std::cout, std::cerr); }
