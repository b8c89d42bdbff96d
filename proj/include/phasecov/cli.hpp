#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasecov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `phasecov` tool. `args` excludes the program name.
/// Errors are written to `err` as one JSON object; the return value is the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace phasecov
