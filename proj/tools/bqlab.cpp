#include "bqlab/runner.hpp"

int main(int argc, char** argv) { return bq::cli_main(argc, argv); }
