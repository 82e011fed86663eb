#pragma once

// Command-line front end. `run` writes the artifact to config.out or to `out`
// and returns the process exit status: 0 on a completed run, 2 when --strict
// is set and some verdict is violated, 1 on errors.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qfast::cli {

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  bool log_spaced = false;
};

/// "lo:hi:n" or "lo:hi:n:log". Throws std::invalid_argument.
GridSpec parse_grid(const std::string& text);
/// Comma-separated doubles. Throws std::invalid_argument.
std::vector<double> parse_list(const std::string& text);

struct RunConfig {
  std::string subcommand;
  std::string function;
  std::string descriptor;
  std::string criterion;
  std::vector<double> eps;
  std::optional<GridSpec> grid;
  std::size_t depth = 20;
  std::size_t lags = 5;
  std::optional<double> k;
  std::optional<double> d;
  std::optional<double> m;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> mu;
  std::optional<double> r1;
  std::optional<double> r2;
  std::string which;
  std::optional<double> a;
  std::optional<double> b;
  std::string format = "json";
  std::string out;
  unsigned jobs = 1;
  bool strict = false;
  /// Seed points file for `orbit`.
  std::string seeds;

  /// Throws std::invalid_argument unless grids are positive and increasing,
  /// every eps lies in (0, 1), depth and lags are >= 1 and jobs >= 1.
  void validate() const;
};

/// Parses argv into a config; --help output goes to `out`. Returns nullopt
/// with `status` set when the program should exit right away.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                     std::ostream& err, int& status);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfast::cli
