#include <iostream>
#include <string>
#include <vector>

#include "shapetone/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shapetone::cli::run(std::move(args), std::cout, std::cerr);
}
