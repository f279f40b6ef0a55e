#include "treefactor/harness.hpp"

int main(int argc, char** argv) { return treefactor::run_cli(argc, argv); }
