#pragma once

namespace erbm::cli {

/// Entry point for the command-line tool; returns the process exit code
/// (0 success, 1 computation failure, 2 usage or parse error).
int run(int argc, const char* const* argv);

}  // namespace erbm::cli
