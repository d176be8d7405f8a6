#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pmon::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode {
  kOk = 0,
  kUsage = 1,  // bad arguments or unreadable input
  kNotExecutable = 2,
  kUndetectable = 3,
};

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(std::string_view bytes);

/// The report with its timing field removed, for byte comparisons.
std::string strip_timing(const std::string& report);

}  // namespace pmon::cli
