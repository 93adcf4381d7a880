#include "dtrans/verify/scenarios.hpp"

int main(int argc, char** argv) { return dtrans::verify::run_cli(argc, argv); }
