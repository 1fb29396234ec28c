#include "gpso/cli.hpp"

int main(int argc, char** argv) { return gpso::cli_main(argc, argv); }
