#include "cli.hpp"

int main(int argc, char** argv) { return smf::cli::run(argc, argv); }
