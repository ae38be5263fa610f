#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lelab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCheck = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one command. args excludes the program name. Results go to out (or
/// to the -o file); a single-line diagnostic goes to err on failure.
///
/// Exit codes: 0 on success, 1 when a requested verification fails, 2 on
/// invalid input or when -o names an existing file and --force is absent.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lelab::cli
