#include <iostream>

#include "lpcoreset/cli.hpp"

int main(int argc, char** argv) { return lpcoreset::run_cli(argc, argv, std::cout, std::cerr); }
