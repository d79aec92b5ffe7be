#include <iostream>

#include "qgraph/cli.hpp"

int main(int argc, char** argv) { return qg::main_entry(argc, argv, std::cout, std::cerr); }
