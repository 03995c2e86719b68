#ifndef HARDY_CLI_HPP
#define HARDY_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace hardy::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hardy::cli

#endif
