#include "levyspde_cli/cli.hpp"

int main(int argc, char** argv) { return levyspde::cli::run(argc, argv); }
