#include "asymcom/cli.hpp"

int main(int argc, char** argv) { return asymcom::run_cli(argc, argv); }
