#include <iostream>

#include "memcon_cli.hpp"

int main(int argc, char** argv) { return memcon::cli::dispatch(argc, argv, std::cout, std::cerr); }
