#include "cli_run.hpp"

int main(int argc, char** argv) { return manin::cli::run(argc, argv); }
