#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpplimits {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of `dpp-limits`; args excludes the program name. CSV goes to
/// --out (or the config's `output`), else to `out`; logs go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpplimits
