#include <string>
#include <vector>

#include "jdhedge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return jdhedge::run_cli(args);
}
