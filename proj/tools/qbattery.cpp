#include <iostream>

#include "qbattery/cli.hpp"

int main(int argc, char** argv) {
    return qbattery::cli::run(argc, argv, std::cout, std::cerr);
}
