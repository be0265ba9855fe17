#include "cexclass/cli.hpp"

int main(int argc, char** argv) { return cexclass::run_cli(argc, argv, std::cout, std::cerr); }
