#include <iostream>

#include "matword/cli/dispatch.hpp"

int main(int argc, char** argv) { return matword::cli::dispatch(argc, argv, std::cout, std::cerr); }
