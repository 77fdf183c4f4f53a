#include "silcal/cli/commands.hpp"

int main(int argc, char** argv) { return silcal::cli::run_cli(argc, argv); }
