#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "aloe/benchmarks.hpp"
#include "aloe/error.hpp"
#include "aloe/io.hpp"
#include "app/app.hpp"

namespace aloe::app {
namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleDeterministicConstraint: return kExitInfeasible;
    case ErrorCode::kEmptyMixture: return kExitEmptyMixture;
    default: return kExitInvalidInput;
  }
}

void require_input(const RunConfig& config, const char* what) {
  if (config.input.empty()) throw Error(ErrorCode::kInvalidInput, std::string("missing ") + what);
}

Report run_estimate(const RunConfig& config) {
  require_input(config, "problem file");
  const HalfSpaceProblem problem = io::problem_from_json(io::read_json(config.input), config.drop_tau);
  double tau_min = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j : problem.active_constraints()) {
    const double t = problem.thresholds()(static_cast<Eigen::Index>(j));
    if (std::isnan(tau_min) || t < tau_min) tau_min = t;
  }
  Report report{"estimate", {}};
  report.rows.push_back(
      estimate_row(problem, std::filesystem::path(config.input).stem().string(), tau_min, config));
  return report;
}

Report run_polygon(const RunConfig& config) {
  std::vector<double> taus = config.taus;
  if (taus.empty()) taus.push_back(6.0);
  Report report{"polygon", {}};
  for (double tau : taus) {
    PolygonSpec spec;
    spec.sides = config.sides;
    spec.tau = tau;
    spec.angles = config.prime ? AngleSet::kPrime : AngleSet::kFull;
    if (!config.input.empty()) {
      spec = io::polygon_from_json(io::read_json(config.input));
      if (!config.taus.empty()) spec.tau = tau;
    }
    const HalfSpaceProblem problem = make_polygon(spec, config.drop_tau);
    const std::string name = spec.angles == AngleSet::kPrime
                                 ? "polygon-prime-" + std::to_string(problem.constraint_count())
                                 : "polygon-" + std::to_string(spec.sides);
    ReportRow row = estimate_row(problem, name, spec.tau, config);
    const PolygonReference ref = polygon_reference(spec);
    row.has_reference = true;
    row.reference_lo = ref.lower;
    row.reference_hi = ref.upper;
    const bool use_upper = spec.tau >= 4.0;
    row.rel_mse_reference = use_upper ? "upper" : "midpoint";
    const double mu = use_upper ? ref.upper : ref.midpoint();
    double sum = 0.0;
    for (const auto& run : row.runs) sum += (run.mu_hat / mu - 1.0) * (run.mu_hat / mu - 1.0);
    row.rel_mse = row.runs.empty() ? (row.mu_hat / mu - 1.0) * (row.mu_hat / mu - 1.0)
                                   : sum / static_cast<double>(row.runs.size());
    report.rows.push_back(std::move(row));
    if (!config.input.empty() && config.taus.empty()) break;
  }
  return report;
}

Report run_highdim(const RunConfig& config) {
  std::vector<HighDimSpec> specs;
  if (!config.input.empty()) {
    specs.push_back(io::highdim_from_json(io::read_json(config.input)));
  } else if (config.family > 0) {
    specs = sample_highdim_family(config.family, config.seed, config.family_dimensions);
  } else {
    specs.push_back(HighDimSpec{config.dimension, config.constraints, config.target_log10, config.seed});
  }
  Report report{"highdim", {}};
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const HighDimProblem hp = make_highdim(specs[k], config.drop_tau);
    const std::string name = "highdim-" + std::to_string(k) + "-d" + std::to_string(specs[k].dimension) + "-J" +
                             std::to_string(specs[k].constraints);
    report.rows.push_back(estimate_row(hp.problem, name, hp.tau, config));
  }
  return report;
}

grid::GridCase load_case(const std::string& input) {
  constexpr std::string_view prefix = "builtin:";
  if (input.rfind(prefix, 0) == 0) return builtin_case(input.substr(prefix.size()));
  return io::grid_from_json(io::read_json(input));
}

std::string case_name(const std::string& input) {
  constexpr std::string_view prefix = "builtin:";
  if (input.rfind(prefix, 0) == 0) return input.substr(prefix.size());
  return std::filesystem::path(input).stem().string();
}

Report run_grid(const RunConfig& config) {
  require_input(config, "--case");
  const grid::GridCase base = load_case(config.input);
  std::vector<double> thetas = config.theta_bars;
  if (thetas.empty()) thetas.push_back(base.theta_bar);
  Report report{"grid", {}};
  for (double theta : thetas) {
    grid::GridCase g = base;
    g.theta_bar = theta;
    const grid::ConstraintSystem cs = grid::assemble_constraints(g);
    const grid::GridProblem gp = grid::to_halfspace_problem(cs, g, config.drop_tau);
    report.rows.push_back(estimate_row(gp.problem, case_name(config.input), theta, config));
  }
  return report;
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const auto results = run_verification(config, config.input);
  bool ok = true;
  if (config.format == Format::kJson) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) {
      checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      ok = ok && r.passed;
    }
    out << nlohmann::json{{"command", "verify"}, {"seed", config.seed}, {"passed", ok}, {"checks", checks}}.dump(2)
        << '\n';
  } else {
    out << "check,passed,detail\n";
    for (const auto& r : results) {
      out << r.name << ',' << (r.passed ? "true" : "false") << ",\"" << r.detail << "\"\n";
      ok = ok && r.passed;
    }
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int dispatch(const RunConfig& config, std::ostream& out) {
  if (config.n < 1) throw Error(ErrorCode::kInvalidInput, "n must be at least 1");
  if (config.reps < 1) throw Error(ErrorCode::kInvalidInput, "reps must be at least 1");
  if (config.command == Subcommand::kVerify) return run_verify(config, out);
  Report report;
  switch (config.command) {
    case Subcommand::kEstimate: report = run_estimate(config); break;
    case Subcommand::kPolygon: report = run_polygon(config); break;
    case Subcommand::kHighDim: report = run_highdim(config); break;
    case Subcommand::kGrid: report = run_grid(config); break;
    case Subcommand::kVerify: break;
  }
  out << (config.format == Format::kCsv ? to_csv(report) : to_json_text(report, config.timestamp));
  const bool empty = std::any_of(report.rows.begin(), report.rows.end(), [](const ReportRow& r) { return r.empty; });
  return empty ? kExitEmptyMixture : kExitOk;
}

}  // namespace

ReportRow estimate_row(const HalfSpaceProblem& problem, std::string case_name, double theta_or_tau,
                       const RunConfig& config) {
  ReportRow row;
  row.case_name = std::move(case_name);
  row.theta_or_tau = theta_or_tau;
  row.n = config.n;
  row.reps = config.reps;
  row.seed = config.seed;
  row.mu_bar = problem.union_bound();
  row.mu_lower = problem.lower_bound();
  row.dropped_probability = problem.dropped_probability();
  row.dropped_events = problem.dropped_constraints().size();
  if (problem.size() == 0 || row.mu_bar == 0.0) {
    row.empty = true;
  } else {
    const EstimatorOptions options{config.block_size, config.threads};
    std::uint64_t draws = 0;
    std::uint64_t multiple = 0;
    double sum = 0.0;
    double var_sum = 0.0;
    for (std::size_t r = 0; r < config.reps; ++r) {
      AloeEstimate e = estimate(problem, config.n, RandomStream(config.seed, static_cast<std::uint32_t>(r)), options);
      sum += e.mu_hat;
      var_sum += e.se * e.se;
      for (std::size_t s = 0; s < e.s_histogram.size(); ++s) {
        draws += e.s_histogram[s];
        if (s >= 1) multiple += e.s_histogram[s];
      }
      row.runs.push_back(std::move(e));
    }
    const auto reps = static_cast<double>(config.reps);
    row.mu_hat = sum / reps;
    row.se = std::sqrt(var_sum) / reps;
    row.s_ge_2_fraction = draws > 0 ? static_cast<double>(multiple) / static_cast<double>(draws) : 0.0;
  }
  if (config.add_dropped_to_bound) {
    row.mu_hat += row.dropped_probability;
    row.mu_bar += row.dropped_probability;
  }
  return row;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output.empty()) return dispatch(config, out);
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw Error(ErrorCode::kInvalidInput, "cannot write " + config.output);
    return dispatch(config, file);
  } catch (const Error& e) {
    err << "aloe: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "aloe: " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

}  // namespace aloe::app
