#include "cli/cli.hpp"

int main(int argc, char** argv) { return critheat::cli::dispatch(argc, argv); }
