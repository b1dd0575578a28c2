#include "rhsolve/cli.hpp"

int main(int argc, char** argv) { return rhsolve::cli::run_cli(argc, argv); }
