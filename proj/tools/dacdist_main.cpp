#include "dacdist/cli.hpp"

int main(int argc, char** argv) { return dacdist::cli::run(argc, argv); }
