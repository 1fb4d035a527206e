#include "polytomo/cli.hpp"

int main(int argc, char** argv) { return polytomo::run_cli(argc, argv); }
