#pragma once

#include <iosfwd>

namespace cohres::cli {

/// Entry point of the `cohres` tool. Exit codes: 0 success, 1 domain error,
/// 2 usage error. All diagnostics go to `err` as single lines.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cohres::cli
