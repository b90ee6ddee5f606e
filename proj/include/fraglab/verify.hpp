#pragma once

#include <iosfwd>

namespace fraglab::cli {

/// Runs the built-in identity and invariant checks; one line per check.
/// Returns true when all pass.
bool run_verify_suite(std::ostream& out);

}  // namespace fraglab::cli
