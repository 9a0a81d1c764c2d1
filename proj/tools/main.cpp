#include "walkdist/cli.hpp"

int main(int argc, char** argv) { return walkdist::run_cli(argc, argv); }
