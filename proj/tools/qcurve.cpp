#include <iostream>

#include "qcurv/cli.hpp"

int main(int argc, char** argv) { return qcurv::run_cli(argc, argv, std::cout, std::cerr); }
