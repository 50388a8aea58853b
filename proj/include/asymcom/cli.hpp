#pragma once

namespace asymcom {

// Entry point for the command-line driver.  Exit codes: 0 success, 2 config
// error, 3 math error, 4 verification failure.
int run_cli(int argc, char** argv);

} // namespace asymcom
