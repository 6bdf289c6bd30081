#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyelast {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // bad flags, failed preconditions, failed checks
inline constexpr int kExitSolver = 2;   // no bracket, residual too large, no convergence

// "a:b:step" inclusive of b (within 1e-9 steps), or a single value.
std::vector<double> parse_range(const std::string& text);

// Worker count for sweeps: hardware concurrency, capped by POLYELAST_THREADS when set.
int worker_count(int jobs);

// Entry point of the polyelast tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyelast
