#include <iostream>

#include "bodymass_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return bodymass::cli::run_cli(args, std::cout, std::cerr);
}
