#include "fusim/cli.hpp"

int main(int argc, char** argv) { return fusim::cli::run(argc, argv); }
