#include "wec/harness.hpp"

int main(int argc, char** argv) { return wec::runExperiment(argc, argv); }
