#include "brat/commands.hpp"

int main(int argc, char** argv) { return brat::run_cli(argc, argv); }
