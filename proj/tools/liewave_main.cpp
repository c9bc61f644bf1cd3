#include "liewave/cli.hpp"

int main(int argc, char** argv) { return liewave::cli_main(argc, argv); }
