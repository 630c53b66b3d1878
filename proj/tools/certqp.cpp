#include "certqp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return certqp::run_cli(argc, argv, std::cout, std::cerr); }
