#include "ldbig/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>
#include <unistd.h>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto color = ldbig::cli::Color::never;
    const char* env = std::getenv("LDBIG_COLOR");
    const std::string mode = env ? env : "auto";
    if (mode == "always" || (mode == "auto" && isatty(STDOUT_FILENO)))
        color = ldbig::cli::Color::always;
    return ldbig::cli::run(args, std::cout, std::cerr, color);
}
