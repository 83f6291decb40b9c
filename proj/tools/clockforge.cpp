#include "clockforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return clockforge::run_cli(argc, argv, std::cout, std::cerr);
}
