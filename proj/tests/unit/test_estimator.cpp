#include <doctest.h>

#include <cmath>
#include <numeric>

#include "aloe/benchmarks.hpp"
#include "aloe/error.hpp"
#include "aloe/estimator.hpp"
#include "aloe/halfspace.hpp"
#include "aloe/normal.hpp"
#include "aloe/variance.hpp"
#include "oracles.hpp"

using aloe::HalfSpaceProblem;
using aloe::RandomStream;
using aloe::stat::normal_cdf;

namespace {

HalfSpaceProblem orthogonal(double t1, double t2) {
  Eigen::MatrixXd omega(2, 2);
  omega << 1, 0, 0, 1;
  Eigen::VectorXd tau(2);
  tau << t1, t2;
  return HalfSpaceProblem(omega, tau);
}

HalfSpaceProblem fan(double tau) {
  Eigen::MatrixXd omega(3, 2);
  const double pi = 3.14159265358979323846;
  for (int j = 0; j < 3; ++j) omega.row(j) << std::cos(j * pi / 3.0), std::sin(j * pi / 3.0);
  return HalfSpaceProblem(omega, Eigen::VectorXd::Constant(3, tau));
}

const double kTwoOrthogonal = 0.044982695392698850;

}  // namespace

TEST_CASE("single event is estimated exactly") {
  Eigen::MatrixXd omega(1, 3);
  omega << 0.0, 0.6, 0.8;
  const HalfSpaceProblem p(omega, Eigen::VectorXd::Constant(1, 2.5));
  for (std::size_t n : {1, 7, 1000}) {
    const auto e = aloe::estimate(p, n, RandomStream(1));
    CHECK(e.mu_hat == normal_cdf(-2.5));
    CHECK(e.se == 0.0);
    CHECK(e.degenerate_se);
    CHECK(!e.warnings.empty());
  }
}

TEST_CASE("duplicated event is estimated exactly") {
  Eigen::MatrixXd omega(2, 2);
  omega << 0.6, 0.8, 0.6, 0.8;
  const HalfSpaceProblem p(omega, Eigen::VectorXd::Constant(2, 1.0));
  const auto e = aloe::estimate(p, 5000, RandomStream(2));
  CHECK(e.mu_hat == doctest::Approx(normal_cdf(-1.0)).epsilon(1e-15));
  CHECK(e.se == 0.0);
  CHECK(e.s_histogram[1] == 5000);
}

TEST_CASE("two orthogonal half-spaces") {
  const HalfSpaceProblem p = orthogonal(2.0, 2.0);
  CHECK(kTwoOrthogonal == doctest::Approx(2 * normal_cdf(-2.0) - normal_cdf(-2.0) * normal_cdf(-2.0)).epsilon(1e-15));
  const auto e = aloe::estimate(p, 100000, RandomStream(3));
  CHECK(std::abs(e.mu_hat - kTwoOrthogonal) < 4.0 * e.se);
  CHECK(e.within_hard_range());
  CHECK(e.hard_range[0] == doctest::Approx(e.union_bound / 2));
  CHECK(e.hard_range[1] == e.union_bound);
}

TEST_CASE("estimate fields") {
  const HalfSpaceProblem p = aloe::make_polygon({20, 2.5, aloe::AngleSet::kFull});
  const auto e = aloe::estimate(p, 20000, RandomStream(4, 9));
  CHECK(e.n == 20000);
  CHECK(std::accumulate(e.s_histogram.begin(), e.s_histogram.end(), std::uint64_t{0}) == 20000);
  CHECK(e.s_histogram.size() == 20);
  CHECK(e.events == 20);
  CHECK(e.seed == 4);
  CHECK(e.stream_id == 9);
  CHECK(e.var_bound_theorem == doctest::Approx(e.mu_hat * (e.union_bound - e.mu_hat) / 20000.0));
  CHECK(e.var_bound_lemma == doctest::Approx(e.mu_hat * e.mu_hat * (20 + 1.0 / 20 - 2) / (4 * 20000.0)));
  CHECK(e.cv_bound ==
        doctest::Approx(std::min(std::sqrt(e.union_bound / e.lower_bound - 1), std::sqrt(19.0)) / std::sqrt(20000.0)));
  CHECK(e.se_over_mu() <= 1.2 * e.cv_bound);
  // Sample-variance identity with the n-1 divisor.
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t s = 1; s <= e.s_histogram.size(); ++s) {
    const double v = e.union_bound / static_cast<double>(s);
    sum += e.s_histogram[s - 1] * v;
    sq += e.s_histogram[s - 1] * v * v;
  }
  const double mean = sum / 20000.0;
  CHECK(e.mu_hat == doctest::Approx(mean).epsilon(1e-14));
  CHECK(e.se == doctest::Approx(std::sqrt((sq - 20000.0 * mean * mean) / 19999.0 / 20000.0)).epsilon(1e-9));
}

TEST_CASE("results do not depend on block size or threads") {
  const HalfSpaceProblem p = aloe::make_polygon({90, 3.0, aloe::AngleSet::kFull});
  const RandomStream stream(5);
  const auto ref = aloe::estimate(p, 10007, stream, {1024, 1});
  for (const aloe::EstimatorOptions opt : {aloe::EstimatorOptions{1, 1}, aloe::EstimatorOptions{333, 1},
                                           aloe::EstimatorOptions{64, 4}, aloe::EstimatorOptions{5000, 3}}) {
    const auto e = aloe::estimate(p, 10007, stream, opt);
    CHECK(e.mu_hat == ref.mu_hat);
    CHECK(e.se == ref.se);
    CHECK(e.s_histogram == ref.s_histogram);
  }
}

TEST_CASE("hard range holds on every run") {
  std::size_t violations = 0;
  for (std::uint32_t r = 0; r < 60; ++r) {
    const HalfSpaceProblem p = aloe::make_polygon({3 + r, 0.5 + 0.1 * r, aloe::AngleSet::kFull});
    const auto e = aloe::estimate(p, 200, RandomStream(6, r));
    violations += e.within_hard_range() ? 0 : 1;
  }
  CHECK(violations == 0);
}

TEST_CASE("errors") {
  Eigen::MatrixXd omega(1, 2);
  omega << 1, 0;
  const HalfSpaceProblem dropped(omega, Eigen::VectorXd::Constant(1, 50.0));
  CHECK_THROWS_AS(aloe::estimate(dropped, 10, RandomStream(1)), aloe::Error);
  try {
    aloe::estimate(dropped, 10, RandomStream(1));
  } catch (const aloe::Error& e) {
    CHECK(e.code() == aloe::ErrorCode::kEmptyMixture);
  }
  CHECK_THROWS_AS(aloe::estimate(orthogonal(1, 1), 0, RandomStream(1)), aloe::Error);
}

TEST_CASE("sub-event estimator") {
  const HalfSpaceProblem p = orthogonal(2.0, 2.0);
  const RandomStream stream(7);
  const auto full = aloe::estimate(p, 100000, stream);
  const auto all = aloe::estimate_subevent(p, [](std::span<const double>) { return true; }, 100000, stream);
  CHECK(all.nu_hat == doctest::Approx(full.mu_hat).epsilon(1e-14));
  CHECK(all.se == doctest::Approx(full.se).epsilon(1e-9));
  const auto none = aloe::estimate_subevent(p, [](std::span<const double>) { return false; }, 1000, stream);
  CHECK(none.nu_hat == 0.0);
  CHECK(none.se == 0.0);
  const auto first = aloe::estimate_subevent(p, [](std::span<const double> x) { return x[0] >= 2.0; }, 100000, stream);
  CHECK(std::abs(first.nu_hat - normal_cdf(-2.0)) < 4.0 * first.se);
  const double nu = normal_cdf(-2.0);
  CHECK(first.se * first.se <= 1.2 * nu * (p.union_bound() - nu) / 100000.0);
}

TEST_CASE("general mixture") {
  const HalfSpaceProblem p = orthogonal(2.0, 2.0);
  SUBCASE("balanced weights give mu_bar / S per draw") {
    const auto probs = p.probabilities();
    const double mu_bar = p.union_bound();
    const std::vector<double> alpha{probs[0] / mu_bar, probs[1] / mu_bar};
    const unsigned char one[] = {1, 0};
    const unsigned char both[] = {1, 1};
    CHECK(aloe::mixture_integrand(alpha, probs, one) == doctest::Approx(mu_bar).epsilon(1e-15));
    CHECK(aloe::mixture_integrand(alpha, probs, both) == doctest::Approx(mu_bar / 2).epsilon(1e-15));
    const auto mix = aloe::estimate_general_mixture(p, alpha, 20000, RandomStream(8));
    const auto plain = aloe::estimate(p, 20000, RandomStream(8));
    CHECK(mix.mu_hat == doctest::Approx(plain.mu_hat).epsilon(1e-12));
    CHECK(mix.se == doctest::Approx(plain.se).epsilon(1e-9));
  }
  SUBCASE("single event") {
    Eigen::MatrixXd omega(1, 2);
    omega << 1, 0;
    const HalfSpaceProblem one(omega, Eigen::VectorXd::Constant(1, 1.7));
    const std::vector<double> alpha{1.0};
    const auto mix = aloe::estimate_general_mixture(one, alpha, 100, RandomStream(9));
    CHECK(mix.mu_hat == normal_cdf(-1.7));
  }
  SUBCASE("unbalanced weights stay unbiased") {
    const std::vector<double> alpha{0.9, 0.1};
    const auto mix = aloe::estimate_general_mixture(p, alpha, 100000, RandomStream(10));
    CHECK(std::abs(mix.mu_hat - kTwoOrthogonal) < 4.0 * mix.se);
    const auto plain = aloe::estimate(p, 100000, RandomStream(10));
    CHECK(mix.se > plain.se);
  }
  SUBCASE("invalid weights") {
    const std::vector<double> negative{-0.5, 1.5};
    const std::vector<double> zero{0.0, 0.0};
    const std::vector<double> short_weights{1.0};
    CHECK_THROWS_AS(aloe::estimate_general_mixture(p, negative, 10, RandomStream(1)), aloe::Error);
    CHECK_THROWS_AS(aloe::estimate_general_mixture(p, zero, 10, RandomStream(1)), aloe::Error);
    CHECK_THROWS_AS(aloe::estimate_general_mixture(p, short_weights, 10, RandomStream(1)), aloe::Error);
  }
}

TEST_CASE("moment identities") {
  SUBCASE("first moment is the probability") {
    const HalfSpaceProblem p = orthogonal(1.0, 1.0);
    const double t1 = 2 * normal_cdf(-1.0) * normal_cdf(1.0);
    const double t2 = normal_cdf(-1.0) * normal_cdf(-1.0);
    const std::vector<double> mass{t1, t2};
    const auto c = aloe::moment_identity_check(p, 1, mass, 0, 100000, RandomStream(11));
    CHECK(c.predicted == doctest::Approx(t1 + t2).epsilon(1e-15));
    CHECK(std::abs(c.empirical - c.predicted) < 4.0 * c.combined_se());
  }
  SUBCASE("second moment with one event") {
    Eigen::MatrixXd omega(1, 2);
    omega << 1, 0;
    const HalfSpaceProblem p(omega, Eigen::VectorXd::Constant(1, 1.0));
    const double p1 = normal_cdf(-1.0);
    const std::vector<double> mass{p1};
    const auto c = aloe::moment_identity_check(p, 2, mass, 0, 100, RandomStream(12));
    CHECK(c.empirical == doctest::Approx(p1 * p1).epsilon(1e-15));
    CHECK(c.predicted == doctest::Approx(p1 * p1).epsilon(1e-15));
  }
  SUBCASE("third moment against plain sampling") {
    const HalfSpaceProblem p = orthogonal(1.0, 1.0);
    const auto mc = aloe::oracle::plain_mc(p, 2000000, 13);
    std::vector<double> mass;
    for (std::size_t s = 1; s < mc.count_histogram.size(); ++s)
      mass.push_back(static_cast<double>(mc.count_histogram[s]) / static_cast<double>(mc.n));
    const auto c = aloe::moment_identity_check(p, 3, mass, mc.n, 200000, RandomStream(14));
    CHECK(std::abs(c.empirical - c.predicted) < 4.0 * c.combined_se());
  }
}

TEST_CASE("theoretical variance matches the variance of mu_bar / S") {
  const HalfSpaceProblem p = fan(0.3);
  const auto mc = aloe::oracle::plain_mc(p, 10000000, 15);
  std::vector<double> mass;
  for (std::size_t s = 1; s < mc.count_histogram.size(); ++s)
    mass.push_back(static_cast<double>(mc.count_histogram[s]) / static_cast<double>(mc.n));
  const double mu_bar = p.union_bound();
  const auto theory = aloe::theoretical_variance(mass, mu_bar);
  const auto e = aloe::estimate(p, 1000000, RandomStream(16));
  const double empirical = e.se * e.se * static_cast<double>(e.n);
  CHECK(std::abs(empirical / theory.variance - 1.0) < 0.01);
}

TEST_CASE("variance and cv bounds over repeated runs") {
  const HalfSpaceProblem p = orthogonal(2.0, 2.0);
  const std::size_t n = 2000;
  const int runs = 200;
  double sum = 0.0;
  double sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    const auto e = aloe::estimate(p, n, RandomStream(17, static_cast<std::uint32_t>(r)));
    sum += e.mu_hat;
    sq += e.mu_hat * e.mu_hat;
  }
  const double mean = sum / runs;
  const double var = (sq - runs * mean * mean) / (runs - 1);
  const double mu_bar = p.union_bound();
  CHECK(std::abs(mean - kTwoOrthogonal) < 4.0 * std::sqrt(var / runs));
  CHECK(var <= 1.2 * kTwoOrthogonal * (mu_bar - kTwoOrthogonal) / n);
  const double cv_bound = std::min(std::sqrt(mu_bar / p.lower_bound() - 1), 1.0) / std::sqrt(double(n));
  CHECK(std::sqrt(var) / mean <= 1.2 * cv_bound);
}
