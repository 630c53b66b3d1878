#pragma once

// Command-line front end: solve, generate, check.
//
// Exit codes of `solve`: 0 solved, 10 primal infeasible, 11 dual infeasible,
// 12 iteration limit, 2 input error. `check` returns 0 when the candidate
// passes, 1 when it fails, 2 on input error.

#include <iosfwd>

namespace certqp {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitPrimalInfeasible = 10;
inline constexpr int kExitDualInfeasible = 11;
inline constexpr int kExitMaxIterations = 12;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace certqp
