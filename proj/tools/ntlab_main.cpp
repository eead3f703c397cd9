#include <iostream>

#include "ntlab/runner.hpp"

int main(int argc, char** argv) { return ntlab::run_cli(argc, argv, std::cout, std::cerr); }
