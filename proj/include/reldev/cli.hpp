#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace reldev {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Subcommands test, simulate, cv, quantile and export-fit. Returns 0 on
/// success, 1 on usage or configuration errors and 2 on data or numeric errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reldev
