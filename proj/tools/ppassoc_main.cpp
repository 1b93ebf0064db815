#include "ppassoc/cli.hpp"

int main(int argc, char** argv) {
    return ppassoc::cli::run(argc, argv);
}
