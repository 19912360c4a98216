#include "evplace/report.hpp"

int main(int argc, char** argv) { return evplace::cli_main(argc, argv); }
