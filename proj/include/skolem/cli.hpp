#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skolem {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 10;   // counterexample, not unique, unsat pair
inline constexpr int kExitResource = 20;  // budget or time limit
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 1;

/// Runs one command line (args[0] is the program name). Subcommands: synth,
/// verify, check-unique, gen, count, interp-exp.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skolem
