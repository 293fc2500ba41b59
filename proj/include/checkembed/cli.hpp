#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace checkembed::cli {

/// Exit codes of `verify`; every other command uses only Ok and Error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInspect = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace checkembed::cli
