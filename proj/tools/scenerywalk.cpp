#include "scenerywalk/cli.hpp"

int main(int argc, char** argv) { return scenerywalk::cli::run(argc, argv); }
