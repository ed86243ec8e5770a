#include "hypabc/cli.hpp"

int main(int argc, char** argv) { return hypabc::run_cli(argc, argv); }
