#pragma once

// Batch front end: configuration parsing and the rhsolve subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhsolve/serialization.hpp"

namespace rhsolve::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNoConvergence = 2,
  kIdentityMismatch = 3,
  kSolverFailure = 4,
};

struct RunConfig {
  bool annulus = false;
  double q = 0.5;
  std::vector<json> family_specs;
  std::vector<CurveFamily> families;
  std::vector<int> windings;
  /// "glue" (collar gluing plus Newton) or "radial" (closed form).
  std::string method = "glue";
  double psi = 0.0;

  int grid = 256;
  int max_grid = 0;
  double tol = 1e-10;
  int max_iter = 30;
  bool damping = true;
  bool certify = true;

  std::string out_dir = "out";
  std::vector<std::string> formats{"json", "csv"};
  std::uint64_t seed = 7;

  double identity_bound = 1e-6;
  /// Winding on |z| = q asserted by the input instead of the measured one.
  std::optional<int> assumed_k1;
  std::vector<double> targets;
  std::optional<std::pair<int, int>> n_range;

  bool wants(const std::string& format) const;
};

/// Validates the whole document; throws ConfigError.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::string& path);

/// "a:b" or "a..b" or a single integer.
std::pair<int, int> parse_n_range(const std::string& text);

/// Least-squares fit y = slope x + intercept with coefficient of determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

int run_solve(const RunConfig& cfg);
int run_check_identity(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
int run_demo_surjectivity(const RunConfig& cfg);

/// Parses the command line and dispatches; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace rhsolve::cli
