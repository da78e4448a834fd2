#include "exchlab/cli/scenario.hpp"

int main(int argc, char** argv) { return exchlab::cli::main_entry(argc, argv); }
