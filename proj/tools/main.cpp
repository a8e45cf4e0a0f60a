#include "propreward/cli.hpp"

int main(int argc, char** argv) { return propreward::cli::run(argc, argv); }
