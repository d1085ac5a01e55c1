#include "trafficrl/harness.hpp"

int main(int argc, char** argv) { return trafficrl::cli_main(argc, argv); }
