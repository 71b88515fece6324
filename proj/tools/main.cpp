#include "dqssa_cli.hpp"

int main(int argc, char** argv) { return dqssa::cli::run(argc, argv); }
