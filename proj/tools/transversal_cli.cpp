#include "transversal/cli.hpp"

int main(int argc, char** argv) { return transversal::cli::run(argc, argv); }
