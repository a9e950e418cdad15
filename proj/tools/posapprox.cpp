#include "posapprox/cli.hpp"

int main(int argc, char** argv) { return posapprox::cli::main(argc, argv); }
