#include "uqseg/cli.hpp"

int main(int argc, char** argv) { return uqseg::cli::run_cli(argc, argv); }
