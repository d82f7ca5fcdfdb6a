#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lgtk::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kNumericError = 3;

/// Runs one command line (args[0] is the program name). Artifacts go to `out`
/// unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgtk::cli
