#include "cholera/io/commands.hpp"

int main(int argc, char** argv) {
    return cholera::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
