#include <algorithm>
#include <cmath>
#include <sstream>

#include "aloe/benchmarks.hpp"
#include "aloe/error.hpp"
#include "aloe/finite_sets.hpp"
#include "aloe/io.hpp"
#include "aloe/normal.hpp"
#include "aloe/variance.hpp"
#include "app/app.hpp"

namespace aloe::app {
namespace {

std::string describe(double value) { return format_double(value); }

CheckResult check_normal_tail() {
  const double phi6 = stat::normal_cdf(-6.0);
  const double rel = std::abs(phi6 / 9.865876450376981e-10 - 1.0);
  double worst = 0.0;
  for (double log_p = -1.0; log_p > -5000.0; log_p *= 1.7) {
    const double t = stat::normal_quantile_log(log_p);
    worst = std::max(worst, std::abs(stat::log_normal_cdf(t) / log_p - 1.0));
  }
  return {"normal-tail", rel < 1e-12 && worst < 1e-12,
          "Phi(-6) rel err " + describe(rel) + ", quantile round trip " + describe(worst)};
}

CheckResult check_truncated_finite() {
  bool ok = true;
  for (double tau = 0.0; tau <= 38.0; tau += 0.5) {
    for (double u : {1e-300, 1e-17, 0.25, 0.5, 1.0 - 1e-16}) {
      const double y = stat::sample_upper_truncated_normal(tau, u);
      ok = ok && std::isfinite(y) && y >= tau;
    }
  }
  return {"truncated-sampler-finite", ok, "tau in [0, 38]"};
}

CheckResult check_lemma(const RunConfig& config) {
  RandomStream rs(config.seed, 101);
  std::size_t violations = 0;
  std::size_t trials = 0;
  double attain = 0.0;
  for (std::size_t J : {2, 5, 10, 50}) {
    std::vector<double> w(J);
    for (int t = 0; t < 1000; ++t, ++trials) {
      for (double& x : w) x = rs.uniform() * (rs.uniform() < 0.3 ? 0.0 : 1.0);
      w[0] += 1e-3;
      if (product_moment(w) > lemma_bound(J) * (1.0 + 1e-12)) ++violations;
    }
    std::fill(w.begin(), w.end(), 0.0);
    w.front() = 1.0;
    w.back() = 1.0;
    attain = std::max(attain, std::abs(product_moment(w) - lemma_bound(J)));
  }
  return {"lemma-bound", violations == 0 && attain <= 1e-12,
          std::to_string(violations) + " of " + std::to_string(trials) + " violate; two-point gap " + describe(attain)};
}

CheckResult check_variance_identity(const RunConfig& config) {
  RandomStream rs(config.seed, 102);
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    const std::size_t universe = 40;
    std::vector<std::vector<std::size_t>> sets(2 + static_cast<std::size_t>(rs.uniform() * 6));
    for (auto& s : sets) {
      for (std::size_t e = 0; e < universe; ++e)
        if (rs.uniform() < 0.15) s.push_back(e);
    }
    const FiniteSetSystem system(universe, sets);
    const std::vector<double> dist = system.exact_count_distribution();
    const std::vector<double> mass(dist.begin() + 1, dist.end());
    if (system.union_bound() <= 0.0) continue;
    const VarianceIdentity v = theoretical_variance(mass, system.union_bound());
    ok = ok && v.consistent && v.variance >= -1e-15;
    const double mu = system.exact_union_probability();
    worst = std::max(worst, std::abs(v.mu - mu));
    ok = ok && v.variance <= mu * (system.union_bound() - mu) + 1e-15;
  }
  return {"variance-identity", ok && worst < 1e-12, "exact finite systems, union gap " + describe(worst)};
}

CheckResult check_estimator(const RunConfig& config) {
  const HalfSpaceProblem problem = make_polygon({36, 3.0, AngleSet::kFull});
  const RandomStream stream(config.seed, 7);
  const AloeEstimate a = estimate(problem, 5000, stream, {1024, 1});
  const AloeEstimate b = estimate(problem, 5000, stream, {97, 3});
  const bool same = a.mu_hat == b.mu_hat && a.se == b.se && a.s_histogram == b.s_histogram;
  const bool range = a.within_hard_range();
  return {"estimator-invariance", same && range,
          "block/thread invariant: " + std::string(same ? "yes" : "no") + ", in hard range: " + (range ? "yes" : "no")};
}

CheckResult check_whitening(const RunConfig& config) {
  RandomStream rs(config.seed, 103);
  const Eigen::Index d = 4;
  GeneralGaussianSpec spec;
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rs.normal();
  spec.sigma = a * a.transpose() + Eigen::MatrixXd::Identity(d, d);
  spec.eta = Eigen::VectorXd::Zero(d);
  spec.gamma.resize(6, d);
  for (Eigen::Index i = 0; i < spec.gamma.size(); ++i) spec.gamma.data()[i] = rs.normal();
  spec.kappa = Eigen::VectorXd::Constant(6, 8.0);
  GeneralGaussianSpec shifted = spec;
  for (Eigen::Index i = 0; i < d; ++i) shifted.eta(i) = rs.normal();
  const HalfSpaceProblem p0 = whiten(spec);
  const HalfSpaceProblem p1 = whiten(shifted);
  double omega_gap = (p0.normals() - p1.normals()).cwiseAbs().maxCoeff();
  double tau_gap = 0.0;
  for (Eigen::Index j = 0; j < 6; ++j) {
    const Eigen::VectorXd g = spec.gamma.row(j).transpose();
    const double expected = g.dot(shifted.eta) / std::sqrt(g.dot(spec.sigma * g));
    tau_gap = std::max(tau_gap, std::abs((p0.thresholds()(j) - p1.thresholds()(j)) - expected));
  }
  return {"whitening-mean-shift", omega_gap <= 1e-12 && tau_gap <= 1e-10,
          "omega gap " + describe(omega_gap) + ", tau gap " + describe(tau_gap)};
}

std::vector<CheckResult> check_grid(const std::string& name, const grid::GridCase& g, const RunConfig& config) {
  std::vector<CheckResult> out;
  const Eigen::MatrixXd lap = grid::build_laplacian(g);
  const Eigen::MatrixXd pinv = grid::pseudo_inverse(lap);
  const double scale = lap.norm();
  const double r1 = (lap * pinv * lap - lap).norm() / scale;
  const double r2 = (pinv * lap * pinv - pinv).norm() / std::max(pinv.norm(), 1e-300);
  out.push_back({"grid-penrose:" + name, r1 <= 1e-8 && r2 <= 1e-8, describe(r1) + ", " + describe(r2)});

  const grid::ConstraintSystem cs = grid::assemble_constraints(g);
  const auto nr = static_cast<Eigen::Index>(cs.random_bus_ids.size());
  const auto expected_rows = 2 * nr + 2 + 2 * static_cast<Eigen::Index>(g.lines.size());
  out.push_back({"grid-row-count:" + name, cs.gamma.rows() == expected_rows,
                 std::to_string(cs.gamma.rows()) + " rows"});

  const CovarianceRoot root = covariance_root(g.sigma);
  RandomStream rs(config.seed, 104);
  std::size_t mismatches = 0;
  std::size_t infeasible = 0;
  std::size_t tested = 0;
  double worst_balance = 0.0;
  Eigen::VectorXd z(nr);
  for (int t = 0; t < 1000; ++t) {
    for (Eigen::Index i = 0; i < nr; ++i) z(i) = 3.0 * rs.normal();
    const Eigen::VectorXd p = cs.eta_random + root.root * z;
    const Eigen::VectorXd lhs = cs.gamma * p;
    bool inside = true;
    bool boundary = false;
    for (Eigen::Index j = 0; j < lhs.size(); ++j) {
      if (std::isinf(cs.kappa(j))) continue;
      inside = inside && lhs(j) <= cs.kappa(j);
      boundary = boundary || std::abs(lhs(j) - cs.kappa(j)) < 1e-9;
    }
    if (boundary) continue;
    ++tested;
    const bool physical = grid::physically_feasible(g, p, 0.0);
    mismatches += inside != physical ? 1 : 0;
    infeasible += physical ? 0 : 1;
    worst_balance = std::max(worst_balance, std::abs(grid::solve_dc_flow(g, p).injections.sum()));
  }
  out.push_back({"grid-constraint-equivalence:" + name, mismatches == 0,
                 std::to_string(mismatches) + " mismatches in " + std::to_string(tested) + " draws (" +
                     std::to_string(infeasible) + " infeasible)"});
  out.push_back({"grid-conservation:" + name, worst_balance <= 1e-10, describe(worst_balance)});
  return out;
}

}  // namespace

std::vector<CheckResult> run_verification(const RunConfig& config, const std::string& grid_case) {
  std::vector<CheckResult> results;
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      results.push_back({name, false, e.what()});
    }
  };
  guarded("normal-tail", [&] { results.push_back(check_normal_tail()); });
  guarded("truncated-sampler-finite", [&] { results.push_back(check_truncated_finite()); });
  guarded("lemma-bound", [&] { results.push_back(check_lemma(config)); });
  guarded("variance-identity", [&] { results.push_back(check_variance_identity(config)); });
  guarded("estimator-invariance", [&] { results.push_back(check_estimator(config)); });
  guarded("whitening-mean-shift", [&] { results.push_back(check_whitening(config)); });
  for (const std::string& name : builtin_case_names()) {
    guarded("grid:" + name, [&] {
      for (auto& r : check_grid(name, builtin_case(name), config)) results.push_back(std::move(r));
    });
  }
  if (!grid_case.empty()) {
    guarded("grid:" + grid_case, [&] {
      for (auto& r : check_grid(grid_case, io::grid_from_json(io::read_json(grid_case)), config))
        results.push_back(std::move(r));
    });
  }
  return results;
}

}  // namespace aloe::app
