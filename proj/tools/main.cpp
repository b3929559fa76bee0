#include "elemsym/cli.hpp"

int main(int argc, char** argv) { return elemsym::run(argc, argv); }
