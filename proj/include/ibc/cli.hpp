#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ibc::cli {

/// Environment variable naming the directory reports go to when --output is absent.
inline constexpr const char* kOutputDirEnv = "IBCSIM_OUTPUT_DIR";

/// Runs one invocation. `args` excludes the program name. Reports go to
/// --output, else $IBCSIM_OUTPUT_DIR/<command>.<format>, else `out`.
///
/// Returns 0 on success, 2 for malformed arguments or config documents and 1
/// for precondition violations; diagnostics are one line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ibc::cli
