#include "ffhsi/cli/cli.hpp"

int main(int argc, char** argv) { return ffhsi::run_cli(argc, argv); }
