#include "cli.hpp"

int main(int argc, char** argv) { return contact::cli::run(argc, argv); }
