#include "cli.hpp"

int main(int argc, char** argv) { return erbm::cli::run(argc, argv); }
