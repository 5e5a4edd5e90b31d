#include <iostream>

#include "drrs/cli.h"

int main(int argc, char** argv) { return drrs::cli::run(argc, argv, std::cout, std::cerr); }
