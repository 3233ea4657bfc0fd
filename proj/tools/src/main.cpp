#include "uwbsd/cli.hpp"

int main(int argc, char** argv) { return uwbsd::cli::parse_and_dispatch(argc, argv); }
