#include "aocsim/cli.hpp"

int main(int argc, char** argv) { return aocsim::run_main(argc, argv); }
