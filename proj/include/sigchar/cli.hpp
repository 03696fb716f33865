#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigchar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

inline constexpr const char *kSchema = "sigchar/1";

/// Entry point of the sigchar tool. args excludes the program name:
///   <command> --manifest FILE [--out DIR] [--seed N] [--quiet]
/// Returns 0 on success, 2 for invalid input and 3 for numerical failure or a
/// violated check.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Command names in the order they are listed by --help.
const std::vector<std::string> &commands();

} // namespace sigchar::cli
