#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxbias::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kNumericalFailure = 2,
  kBreakdownViolation = 3,
};

/// Contamination grid reaches or passes the breakdown point.
class BreakdownViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "start:stop:step", inclusive of stop up to rounding.
std::vector<double> parse_linear_grid(const std::string& text);

/// "start:stop:count", log-spaced; start must be positive.
std::vector<double> parse_log_grid(const std::string& text);

/// Runs one subcommand. `args` excludes the program name. Output goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxbias::cli
