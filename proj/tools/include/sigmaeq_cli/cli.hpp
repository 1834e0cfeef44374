#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmaeq::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // a hard assertion of the subcommand did not hold
  kUsage = 2,
  kResource = 3,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integers written plainly or in scientific notation ("1e6", "2.5e3");
// UsageError when the value is not a non-negative integer.
std::uint64_t parse_count(const std::string& text);
double parse_real(const std::string& text);
std::vector<std::uint64_t> parse_count_list(const std::string& text);

// Runs one invocation. args excludes the program name. Reports go to out
// (or the --output file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sigmaeq::cli
