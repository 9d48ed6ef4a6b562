#include <iostream>

#include "mockpadic/cli.hpp"

int main(int argc, char** argv) { return mockpadic::cli::run(argc, argv, std::cout, std::cerr); }
