#pragma once

#include <iosfwd>

namespace tritherm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // bad flags, config or parameters
inline constexpr int kExitNumerical = 3;  // the computation itself failed

/// Entry point shared by the executable and the tests. Summaries go to `out`,
/// warnings and errors to `err`; CSV files are only written where --out points.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tritherm::cli
