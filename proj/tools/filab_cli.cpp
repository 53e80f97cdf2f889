#include "filab/cli.hpp"

int main(int argc, char** argv) { return filab::cli_dispatch(argc, argv); }
