#include "psadf/cli.hpp"

int main(int argc, char** argv) { return psadf::run_cli(argc, argv); }
