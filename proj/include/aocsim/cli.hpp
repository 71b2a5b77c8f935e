#pragma once

namespace aocsim {

// Full command-line entry point: parse flags, run or sweep, emit results.
// Returns the process exit code: 0 success, 1 usage error, 2 validation
// error, 3 runtime error.
int run_main(int argc, const char* const* argv);

}  // namespace aocsim
