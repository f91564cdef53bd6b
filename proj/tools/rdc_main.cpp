#include "rdc/run.hpp"

int main(int argc, char** argv) {
    return rdc::cli_main(argc, argv);
}
