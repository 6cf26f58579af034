#include "tst/cli/run.hpp"

int main(int argc, char** argv) { return tst::cli::main_cli(argc, argv); }
