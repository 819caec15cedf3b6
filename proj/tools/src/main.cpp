#include "modelavg_cli/run.hpp"

int main(int argc, char** argv) { return modelavg::cli::main_entry(argc, argv); }
