#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return skeinlab::run(argc, argv, std::cout, std::cerr); }
