#include "ergoplan_cli/commands.hpp"

int main(int argc, char** argv) { return ergoplan::cli::run(argc, argv); }
