#include <iostream>

#include "kaon/cli.hpp"

int main(int argc, char** argv) { return kaon::cli::run(argc, argv, std::cout, std::cerr); }
