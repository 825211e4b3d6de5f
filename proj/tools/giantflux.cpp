#include "giantflux/cli.hpp"

int main(int argc, char** argv) { return giantflux::cli::dispatch(argc, argv); }
