#include <iostream>

#include "reparse/cli.hpp"

int main(int argc, char** argv) { return reparse::run(argc, argv, std::cout, std::cerr); }
