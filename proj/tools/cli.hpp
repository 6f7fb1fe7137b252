#pragma once

#include <iosfwd>

namespace sepmetrics::cli {

/// Entry point of the `sepmetrics` command. Returns the process exit code:
/// 0 success, 1 unexpected failure, 2 input/format/usage error, 3 metric
/// precondition violated.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sepmetrics::cli
