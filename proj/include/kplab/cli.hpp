#pragma once

namespace kplab {

// Full command-line front end.  Returns the process exit code:
// 0 = every checked inequality holds, 2 = at least one violation verdict,
// 1 = configuration or execution error.
int run_cli(int argc, char** argv);

// Default master seed used when neither the config file nor --seed sets one.
inline constexpr unsigned long long kDefaultSeed = 20260825ULL;

}  // namespace kplab
