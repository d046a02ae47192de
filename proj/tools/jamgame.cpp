#include <iostream>

#include "jamgame/cli.hpp"

int main(int argc, char** argv) { return jamgame::cli::run(argc, argv, std::cout, std::cerr); }
