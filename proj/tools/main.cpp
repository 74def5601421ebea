#include "plateforge/cli.hpp"

int main(int argc, char** argv) { return plateforge::cli::run(argc, argv); }
