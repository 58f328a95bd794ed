#include "heegner/cli.hpp"

int main(int argc, char** argv) { return heegner::cli::dispatch(argc, argv); }
