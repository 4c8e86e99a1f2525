#pragma once

#include <iosfwd>

namespace evg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;

// Parses argv and runs one subcommand. Results without an `-o` path go to
// `out`; diagnostics and the one-line JSON summary go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace evg::cli
