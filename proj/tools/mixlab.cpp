#include <iostream>

#include "mixlab/cli.hpp"

int main(int argc, char** argv) {
    return mixlab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
