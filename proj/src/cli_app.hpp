#ifndef MATCHFORGE_CLI_APP_HPP
#define MATCHFORGE_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace matchforge {

// Exit codes are a stable contract:
//   0 pass / success
//   1 internal contract violation
//   2 instance or usage error
//   3 guard violation
//   4 witness / counterexample found
//   5 incompatible axiom set
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInstance = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitWitness = 4;
inline constexpr int kExitIncompatible = 5;

/// Runs the command-line interface on the given arguments (without argv[0]).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matchforge

#endif
