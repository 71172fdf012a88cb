#include "nlsb/cli.hpp"

int main(int argc, char** argv) { return nlsb::run_cli(argc, argv); }
