#include "betwise/cli.hpp"

int main(int argc, char** argv) { return betwise::cli_main(argc, argv); }
