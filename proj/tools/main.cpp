#include <string>
#include <vector>

#include "icesurf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return icesurf::cli::run(args);
}
