#include "lohi_cli.hpp"

int main(int argc, char** argv) { return lohi::cli::run(argc, argv); }
