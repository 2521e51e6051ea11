#include <iostream>

#include "bootperc/cli.hpp"

int main(int argc, char** argv) { return bootperc::cli::run(argc, argv, std::cout, std::cerr); }
