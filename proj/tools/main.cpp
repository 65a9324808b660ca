#include "tfloc/cli.hpp"

int main(int argc, char** argv) { return tfloc::cli::main(argc, argv); }
