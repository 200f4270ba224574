#pragma once

#include <iosfwd>

namespace vtg::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kFalsified = 2;
inline constexpr int kResource = 3;
inline constexpr int kBadInput = 4;

/// Runs the `vtg` command line. `--output -` (the default) writes to `out`;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vtg::cli
