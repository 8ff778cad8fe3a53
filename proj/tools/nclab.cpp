#include "nclab/cli.hpp"

int main(int argc, char** argv) { return nclab::command_dispatch(argc, argv); }
