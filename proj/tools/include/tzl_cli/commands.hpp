#pragma once

#include "tzl_cli/config.hpp"

#include <iosfwd>

namespace tzl::cli {

/// Runs one experiment and writes its artifacts plus run.json into
/// config.out. Exit codes: 0 success, 1 precondition or I/O failure (and
/// selftest failures), 2 numerical convergence failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace tzl::cli
