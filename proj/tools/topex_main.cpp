#include "topex/cli.hpp"

int main(int argc, char** argv) { return topex::cli::run(argc, argv); }
