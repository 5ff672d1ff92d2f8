#include <iostream>
#include <string>
#include <vector>

#include "latprof/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return latprof::run(args, std::cout, std::cerr);
}
