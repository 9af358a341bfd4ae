#pragma once

#include <iosfwd>

namespace specreg {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `specreg` tool. Subcommands: axioms, kn-check, select, mc, rate,
/// concentration, lemmas. The summary goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace specreg
