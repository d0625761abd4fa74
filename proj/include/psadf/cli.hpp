#pragma once

namespace psadf {

// Command-line driver. Exit codes: 0 success, 1 check mismatch,
// 2 usage or parse error, 3 analysis error.
int run_cli(int argc, char** argv);

}  // namespace psadf
