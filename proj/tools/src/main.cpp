#include "cvkey/cli.hpp"

int main(int argc, char** argv) { return cvkey::cli::run(argc, argv); }
