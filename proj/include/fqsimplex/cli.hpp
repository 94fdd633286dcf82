#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fqsimplex::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitBoundViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Runs one subcommand; `args` excludes the program name. JSON lines go to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fqsimplex::cli
