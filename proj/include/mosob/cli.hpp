#pragma once

#include <iosfwd>

#include "mosob/config.hpp"

namespace mosob {

enum ExitCode { kExitPass = 0, kExitViolation = 1, kExitUsage = 2 };

// runs the subcommand named in c.command; data goes to files or `out`,
// diagnostics to `err`
int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err);

// flags, MOSOB_* environment overrides and an optional --config document,
// in that order of precedence
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mosob
