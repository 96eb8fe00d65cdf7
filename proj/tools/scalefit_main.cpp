#include "scalefit/cli.hpp"

int main(int argc, char** argv) { return scalefit::run_cli(argc, argv); }
