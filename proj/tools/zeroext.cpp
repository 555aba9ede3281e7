#include "zeroext/cli.hpp"

int main(int argc, char** argv) { return zeroext::run_cli(argc, argv); }
