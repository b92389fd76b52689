#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holo::cli {

/// Runs one command line (without the program name). Artifacts go to
/// --output when given, else to `out`; diagnostics go to `err`.
/// Returns 0 on success, 1 on a validation or parse error, 2 when a run
/// detects a broken invariant.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
