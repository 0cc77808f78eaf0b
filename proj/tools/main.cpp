#include "cli.hpp"

int main(int argc, char** argv) { return fjet::cli::run(argc, argv); }
