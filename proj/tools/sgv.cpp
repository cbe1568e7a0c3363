#include "sgv/cli.hpp"

int main(int argc, char** argv) { return sgv::cli::run(argc, argv); }
