#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "app/app.hpp"

namespace {

using aloe::app::Format;
using aloe::app::RunConfig;
using aloe::app::Subcommand;

void add_common(CLI::App& cmd, RunConfig& config, std::string& format) {
  cmd.add_option("--n", config.n, "Samples per replication")->check(CLI::PositiveNumber);
  cmd.add_option("--reps", config.reps, "Independent replications")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", config.seed, "Random seed (default: $ALOE_SEED or 20180514)");
  cmd.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--output,-o", config.output, "Write the report to a file");
  cmd.add_option("--block-size", config.block_size, "Samples per block")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--drop-below", config.drop_tau, "Drop events whose threshold exceeds this value");
  cmd.add_flag("--add-dropped-to-bound", config.add_dropped_to_bound,
               "Add the probability of dropped events to mu_hat and mu_bar");
  cmd.add_flag("--no-timestamp{false}", config.timestamp, "Omit the timestamp from JSON reports");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  config.seed = aloe::app::default_seed();
  std::string format = "json";

  CLI::App app{"Union-of-rare-events probability estimation"};
  app.require_subcommand(1);

  auto* estimate = app.add_subcommand("estimate", "Estimate the union probability of a problem file");
  estimate->add_option("input", config.input, "Problem file (JSON)")->required();
  add_common(*estimate, config, format);

  auto* polygon = app.add_subcommand("polygon", "Probability outside a polygon circumscribing a circle");
  polygon->add_option("--tau", config.taus, "Circle radius (repeatable)");
  polygon->add_option("--J", config.sides, "Number of sides")->check(CLI::Range(3, 1 << 24));
  polygon->add_flag("--prime", config.prime, "Use only the prime angles below 360");
  polygon->add_option("--spec", config.input, "Polygon spec file (JSON)");
  add_common(*polygon, config, format);

  auto* highdim = app.add_subcommand("highdim", "Random half-spaces in high dimension");
  highdim->add_option("--spec", config.input, "High-dimensional spec file (JSON)");
  highdim->add_option("--d", config.dimension, "Dimension")->check(CLI::Range(2, 1 << 20));
  highdim->add_option("--J", config.constraints, "Number of half-spaces")->check(CLI::PositiveNumber);
  highdim->add_option("--target", config.target_log10, "Union bound is 10^-target");
  highdim->add_option("--family", config.family, "Draw this many random specs instead");
  highdim->add_option("--dims", config.family_dimensions, "Dimensions for --family");
  add_common(*highdim, config, format);

  auto* grid = app.add_subcommand("grid", "Phase-limit violation probability of a DC network");
  grid->add_option("--case", config.input, "Grid case file (JSON) or builtin:<name>")->required();
  grid->add_option("--theta-bar", config.theta_bars, "Phase limit (repeatable)");
  add_common(*grid, config, format);

  auto* verify = app.add_subcommand("verify", "Run the invariant checks");
  verify->add_option("--case", config.input, "Additional grid case file to check");
  add_common(*verify, config, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aloe::app::kExitInvalidInput;
  }

  const std::map<CLI::App*, Subcommand> commands{{estimate, Subcommand::kEstimate},
                                                 {polygon, Subcommand::kPolygon},
                                                 {highdim, Subcommand::kHighDim},
                                                 {grid, Subcommand::kGrid},
                                                 {verify, Subcommand::kVerify}};
  config.command = commands.at(app.get_subcommands().front());
  config.format = format == "csv" ? Format::kCsv : Format::kJson;
  return aloe::app::run(config, std::cout, std::cerr);
}
