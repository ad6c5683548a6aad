#include "csitlab/cli.hpp"

int main(int argc, char** argv) { return csitlab::cli::main(argc, argv); }
