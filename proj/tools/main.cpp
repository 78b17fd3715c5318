#include "aptmine/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return aptmine::run(argc, argv, std::cout, std::cerr); }
