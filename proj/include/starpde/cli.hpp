#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace starpde {

/// Command-line front end. Report JSON goes to out, a human-readable summary
/// to err (suppressed by --format text, which prints text to out instead).
/// Exit codes: 0 success / true verdict, 1 mathematical false verdict,
/// 2 errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace starpde
