#include <iostream>

#include "consensus/cli/app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return consensus::cli::run_cli(args, std::cout, std::cerr);
}
