#include "qecad/cli.hpp"

int main(int argc, char** argv) { return qecad::cli::run(argc, argv); }
