#include "cli.hpp"

int main(int argc, char** argv) { return thermo::cli::main_entry(argc, argv); }
