#include "cli.hpp"

int main(int argc, char** argv) { return qdnls::cli::run(argc, argv); }
