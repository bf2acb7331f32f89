#include "rotor/cli.hpp"

int main(int argc, char** argv) { return rotor::cli::run_main(argc, argv); }
