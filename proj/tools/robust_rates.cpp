#include <iostream>

#include "rr/app.hpp"

int main(int argc, char** argv) { return rr::run_cli(argc, argv, std::cout, std::cerr); }
