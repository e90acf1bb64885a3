#include <iostream>
#include <vector>

#include "weakdl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return weakdl::cli::run(args, std::cout, std::cerr);
}
