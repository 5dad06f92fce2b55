#include <iostream>

#include "wlp/cli.hpp"

int main(int argc, char** argv) { return wlp::run_cli(argc, argv, std::cout, std::cerr); }
