#include "extham/cli.h"

#include <iostream>

int main(int argc, char** argv) { return extham::cli::run(argc, argv, std::cout, std::cerr); }
