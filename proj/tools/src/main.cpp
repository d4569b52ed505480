#include <iostream>

#include "fracrte/cli.hpp"

int main(int argc, char** argv) { return fracrte::cli::main(argc, argv, std::cout, std::cerr); }
