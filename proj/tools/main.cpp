#include "netcon/cli.hpp"

int main(int argc, char** argv) { return netcon::run_cli(argc, argv); }
