#include "cli.hpp"

int main(int argc, char** argv) { return gpair::cli::cli_main(argc, argv); }
