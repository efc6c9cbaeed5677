#include "hitr/cli.hpp"

int main(int argc, char** argv) { return hitr::cli::main(argc, argv); }
