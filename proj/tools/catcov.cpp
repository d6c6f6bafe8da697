#include <iostream>
#include <vector>

#include "catcov/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return catcov::run_cli(args, std::cout, std::cerr);
}
