#pragma once

#include <iosfwd>

namespace rulescore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `rulescore` tool. Results go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on usage errors, 2 on data or schema
/// errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rulescore::cli
