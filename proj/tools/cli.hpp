#pragma once

// Command-line front end: `run`, `eval` and `compare` over scenario files.
//
// Exit codes: 0 all verdicts pass, 1 an invariant verdict failed,
// 2 configuration or usage error, 3 runtime simulation error.

#include <iosfwd>

namespace smoothsafe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smoothsafe::cli
