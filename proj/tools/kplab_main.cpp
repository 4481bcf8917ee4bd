#include "kplab/cli.hpp"

int main(int argc, char** argv) { return kplab::run_cli(argc, argv); }
