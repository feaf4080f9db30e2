#include <vector>

#include "wpme/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wpme::run_cli(std::move(args));
}
