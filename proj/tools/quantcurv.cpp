#include "cli.hpp"

int main(int argc, char** argv) { return quantcurv::cli::main(argc, argv); }
