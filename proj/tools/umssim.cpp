#include "umssim/cli.hpp"

int main(int argc, char** argv) { return umssim::cli_main(argc, argv); }
