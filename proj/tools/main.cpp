#include "checkembed/cli.hpp"

int main(int argc, char** argv) { return checkembed::cli::run(argc, argv); }
