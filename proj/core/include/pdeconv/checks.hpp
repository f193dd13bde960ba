#pragma once

#include <iosfwd>

namespace pdeconv {

/// Runs the executable invariant and diagnostic suite at desk scale and
/// prints one TAP line (`ok N - name` / `not ok N - name`) per check.
/// Returns the number of failed checks.
int run_check_suite(std::ostream& os);

} // namespace pdeconv
