#include <iostream>

#include "cmcdress/cli.hpp"

int main(int argc, char** argv) {
    return cmcdress::run_cli(argc, argv, std::cout, std::cerr);
}
