#include <string>
#include <vector>

#include "sehp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sehp::cli::run(args);
}
