// Command-line front end. run_cli() is the whole program minus process
// setup, so tests can drive it with argument vectors and string streams.
//
// Exit codes: 0 success, 1 usage or parse error, 2 expansion still open at
// the step limit, 3 input list not nice, 4 a verification failed or a size
// cap was hit.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "padiccf/cf_engine.hpp"

namespace padiccf {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { text, json };

struct RunConfig {
  unsigned long p = 5;
  Flavor flavor = Flavor::browkin;
  std::size_t max_steps = kDefaultMaxSteps;
  /// Largest omega a construction may reach.
  unsigned long precision_cap = 1'000'000;
  /// Largest baby-step table a discrete log may allocate.
  unsigned long long dlog_budget = 1ull << 24;
  OutputFormat output = OutputFormat::text;
  std::optional<std::string> out_file;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int open = 2;
inline constexpr int not_nice = 3;
inline constexpr int failed = 4;
}  // namespace exit_code

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padiccf
