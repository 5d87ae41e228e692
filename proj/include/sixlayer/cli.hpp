#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sixlayer::cli {

/// Exit codes of the sixlayer tool.
enum ExitStatus : int {
  kOk = 0,               // success, no errors found
  kFindings = 1,         // validation errors (or warnings with --strict)
  kUsageOrFailure = 2,   // usage, IO or parse failure
};

/// Environment variable naming a taxonomy file; --taxonomy takes precedence.
inline constexpr const char* kTaxonomyEnv = "SIXLAYER_TAXONOMY";

/// Runs the tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sixlayer::cli
