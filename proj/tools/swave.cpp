#include <string>
#include <vector>

#include "shiftwave/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shiftwave::cli::run(args);
}
