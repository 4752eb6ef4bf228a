#pragma once

namespace singfde::cli {

/// Entry point of the command-line tool; returns the process exit code
/// (0 success, 1 config/usage error, 2 criterion refusal, 3 non-convergence).
int run(int argc, const char* const* argv);

} // namespace singfde::cli
