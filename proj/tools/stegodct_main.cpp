#include "stegodct/cli.hpp"

int main(int argc, char** argv) { return stegodct::cli::run(argc, argv); }
