#include "scatsrc/cli.hpp"

int main(int argc, char** argv) { return scatsrc::run_cli(argc, argv); }
