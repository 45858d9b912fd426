#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hillband::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFailure = 1,
  kUsage = 2,
  kTruncation = 3,
  kOracleFailure = 4,
};

enum class Format { csv, json };

struct RunConfig {
  double k0 = 1.0;
  double s = 0.1;
  double k2_min = -2.0;
  double k2_max = 10.0;
  int samples = 500;
  int grid_n = 8000;
  int spps_terms = 40;
  double tol = 1e-6;
  double root_tol = 1e-10;
  std::string out_path;  // empty: standard output
  Format format = Format::csv;
  std::vector<double> k2;  // bloch
  int cells = 1;           // bloch
  bool allow_gap = false;  // bloch
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError when a field violates the RunConfig invariants.
void check_config(const RunConfig& cfg);

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

/// Parses `args` (without the program name) and runs the subcommand.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, Streams io);

/// Entry point for the binary: wires stdout/stderr and colour detection.
int main(int argc, char** argv);

}  // namespace hillband::cli
