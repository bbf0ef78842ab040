#include "ellwave/cli.hpp"

int main(int argc, char** argv) { return ellwave::cli::run(argc, argv); }
