#include <iostream>

#include "rulescore/cli.hpp"

int main(int argc, char** argv) { return rulescore::cli::run(argc, argv, std::cout, std::cerr); }
