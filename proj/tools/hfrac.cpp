#include <hfrac/cli/commands.hpp>

int main(int argc, char** argv) { return hfrac::cli::run(argc, argv); }
