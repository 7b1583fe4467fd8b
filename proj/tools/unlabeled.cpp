#include "unlabeled/cli.hpp"

int main(int argc, char** argv) { return unlabeled::cli::run_cli(argc, argv); }
