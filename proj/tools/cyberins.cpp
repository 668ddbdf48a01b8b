#include <iostream>
#include <string>
#include <vector>

#include "cyberins/cli.hpp"

int main(int argc, char** argv) {
    return cyberins::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
