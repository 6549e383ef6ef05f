#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seba::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Parses the command line, runs one subcommand and writes its records to
/// `out` (or to --output). Diagnostics go to `err`. Returns 0 on success, 1
/// when a computation rejects its input or the output cannot be written, 2
/// on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, for arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace seba::cli
