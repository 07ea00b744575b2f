#include "svstokes/cli.hpp"

int main(int argc, char **argv) { return svstokes::cli_main(argc, argv); }
