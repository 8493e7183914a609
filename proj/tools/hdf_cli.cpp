#include "hdf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hdf::run_cli(argc, argv, std::cout, std::cerr);
}
