#include <iostream>

#include "mw/cli.hpp"

int main(int argc, char** argv) { return mw::run_cli(argc, argv, std::cout, std::cerr); }
