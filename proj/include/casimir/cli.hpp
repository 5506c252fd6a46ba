#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace casimir::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name; args[0] is the
/// subcommand (pair, sphere, self-energy, dielectric, sweep, verify).
/// Records go to `out` unless an output path is given; errors are written
/// to `err` as a JSON object.
int run_subcommand(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace casimir::cli
