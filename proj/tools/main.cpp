#include "torusmin/cli.hpp"

int main(int argc, char** argv) { return torusmin::cliMain(argc, argv); }
