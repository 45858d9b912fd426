#include "hillband/cli.hpp"

int main(int argc, char** argv) { return hillband::cli::main(argc, argv); }
