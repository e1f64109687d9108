#include <iostream>

#include "lorasf/run.hpp"

int main(int argc, char** argv) {
    return lorasf::cli_main(argc, argv, std::cout, std::cerr);
}
