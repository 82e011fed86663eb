#include <iostream>

#include "qfast/cli.hpp"

int main(int argc, char** argv) { return qfast::cli::main_entry(argc, argv, std::cout, std::cerr); }
