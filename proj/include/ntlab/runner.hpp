#pragma once

// Command-line front end: option parsing, table and curve caches, JSON-lines
// and CSV report files, exit statuses.

#include <cstdint>
#include <iosfwd>

#include "ntlab/errors.hpp"

namespace ntlab {

enum ExitStatus : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitResource = 3 };

int exit_status_for(ErrorKind kind);

/// Table limit actually built for a request of `need` entries; rounding up lets
/// nearby runs share one cache file.
std::uint64_t table_limit_for(std::uint64_t need, bool tau);

/// Parses argv, runs one subcommand and appends its reports. Returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ntlab
