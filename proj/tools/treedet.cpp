#include "treedet/cli.hpp"

int main(int argc, char** argv) { return treedet::run_command(argc, argv); }
