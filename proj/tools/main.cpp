#include <string>
#include <vector>

#include "nagatag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nagatag::cli::run(args);
}
