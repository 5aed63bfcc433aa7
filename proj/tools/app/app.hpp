#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aloe/estimator.hpp"
#include "aloe/power_grid.hpp"
#include "app/config.hpp"

namespace aloe::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 1,
  kExitInfeasible = 2,
  kExitEmptyMixture = 3,
  kExitVerifyFailed = 4,
};

/// One report line: a problem estimated over `reps` independent replications.
struct ReportRow {
  std::string case_name;
  double theta_or_tau = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double mu_hat = 0.0;  ///< mean over replications
  double se = 0.0;  ///< se of that mean
  double mu_lower = 0.0;
  double mu_bar = 0.0;
  double s_ge_2_fraction = 0.0;
  std::uint64_t seed = 0;
  double dropped_probability = 0.0;
  std::size_t dropped_events = 0;
  bool empty = false;  ///< mu_bar == 0: nothing to sample
  std::vector<AloeEstimate> runs;

  // polygon only
  bool has_reference = false;
  double reference_lo = 0.0;
  double reference_hi = 0.0;
  double rel_mse = 0.0;
  std::string rel_mse_reference;  ///< "midpoint" or "upper"
};

struct Report {
  std::string command;
  std::vector<ReportRow> rows;
};

/// Parses the subcommand and writes the report to `out` (or config.output).
/// Diagnostics go to `err`. Returns a process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs `reps` estimations of `problem` on stream ids 0..reps-1 and aggregates.
ReportRow estimate_row(const HalfSpaceProblem& problem, std::string case_name, double theta_or_tau,
                       const RunConfig& config);

std::string format_double(double value);
std::string to_csv(const Report& report);
std::string to_json_text(const Report& report, bool timestamp);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The invariant suite behind `aloe verify`. `grid_case` is checked in
/// addition to the built-in cases when non-empty.
std::vector<CheckResult> run_verification(const RunConfig& config, const std::string& grid_case);

/// Small synthetic networks: "three_bus", "ten_bus", "dominant", "disjoint".
grid::GridCase builtin_case(const std::string& name);
std::vector<std::string> builtin_case_names();

}  // namespace aloe::app
