#include <doctest.h>

#include <cmath>
#include <vector>

#include "aloe/benchmarks.hpp"
#include "aloe/error.hpp"
#include "aloe/halfspace.hpp"
#include "aloe/normal.hpp"
#include "oracles.hpp"

using aloe::HalfSpaceProblem;

namespace {

HalfSpaceProblem random_problem(std::size_t J, std::size_t d, std::uint64_t seed, double tau_scale) {
  aloe::RandomStream rs(seed);
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < omega.size(); ++i) omega.data()[i] = rs.normal();
  omega.rowwise().normalize();
  Eigen::VectorXd tau(static_cast<Eigen::Index>(J));
  for (Eigen::Index j = 0; j < tau.size(); ++j) tau(j) = tau_scale * rs.uniform();
  return HalfSpaceProblem(omega, tau);
}

}  // namespace

TEST_CASE("event count examples") {
  const HalfSpaceProblem polygon = aloe::make_polygon({12, 2.0, aloe::AngleSet::kFull});
  const std::vector<double> origin{0.0, 0.0};
  CHECK(aloe::event_count(polygon, origin) == 0);

  Eigen::MatrixXd omega(2, 2);
  omega << 1, 0, 0, 1;
  const HalfSpaceProblem axes(omega, Eigen::VectorXd::Zero(2));
  const std::vector<double> x{1.0, 1.0};
  CHECK(aloe::event_count(axes, x) == 2);
}

TEST_CASE("boundary points count as inside") {
  Eigen::MatrixXd omega(2, 2);
  omega << 1, 0, 0, 1;
  Eigen::VectorXd tau(2);
  tau << 0.5, 0.25;
  const HalfSpaceProblem p(omega, tau);
  const std::vector<double> on_first{0.5, -3.0};
  const std::vector<double> on_both{0.5, 0.25};
  const std::vector<double> just_below{std::nextafter(0.5, 0.0), 0.0};
  CHECK(aloe::event_count(p, on_first) == 1);
  CHECK(aloe::event_count(p, on_both) == 2);
  CHECK(aloe::event_count(p, just_below) == 0);
}

TEST_CASE("event count agrees with a scalar loop") {
  const HalfSpaceProblem p = random_problem(25, 6, 10, 1.5);
  aloe::RandomStream rs(11);
  std::vector<double> x(6);
  for (int t = 0; t < 1000; ++t) {
    rs.fill_normal(x);
    std::size_t expected = 0;
    for (Eigen::Index j = 0; j < 25; ++j) {
      double dot = 0.0;
      for (Eigen::Index k = 0; k < 6; ++k) dot += p.normals()(j, k) * x[static_cast<std::size_t>(k)];
      expected += dot >= p.thresholds()(j) ? 1 : 0;
    }
    REQUIRE(aloe::event_count(p, x) == expected);
    REQUIRE(p.count(x) == expected);
  }
}

TEST_CASE("block counting matches pointwise counting") {
  const HalfSpaceProblem p = random_problem(40, 5, 12, 2.0);
  aloe::RandomStream rs(13);
  Eigen::MatrixXd points(5, 64);
  std::vector<std::size_t> given(64);
  for (Eigen::Index c = 0; c < 64; ++c) {
    given[static_cast<std::size_t>(c)] = static_cast<std::size_t>(c) % 40;
    p.draw_given(given[static_cast<std::size_t>(c)], rs,
                 std::span<double>(points.col(c).data(), 5));
  }
  std::vector<std::size_t> counts(64);
  p.count_given_block(given, points, counts);
  for (Eigen::Index c = 0; c < 64; ++c) {
    const std::span<const double> x(points.col(c).data(), 5);
    CHECK(counts[static_cast<std::size_t>(c)] == p.count_given(given[static_cast<std::size_t>(c)], x));
    CHECK(counts[static_cast<std::size_t>(c)] >= 1);
  }
}

TEST_CASE("conditional draws land in their event") {
  const HalfSpaceProblem p = random_problem(10, 3, 20, 4.0);
  aloe::RandomStream rs(21);
  for (std::size_t j = 0; j < 10; ++j) {
    for (int t = 0; t < 500; ++t) {
      const auto draw = aloe::conditional_draw(p, j, rs);
      double dot = 0.0;
      for (Eigen::Index k = 0; k < 3; ++k) dot += p.normals()(static_cast<Eigen::Index>(j), k) * draw.x[static_cast<std::size_t>(k)];
      REQUIRE(dot >= p.thresholds()(static_cast<Eigen::Index>(j)) - 1e-12);
      REQUIRE(draw.count >= 1);
    }
  }
}

TEST_CASE("single and duplicated events") {
  Eigen::MatrixXd one(1, 2);
  one << 0.6, 0.8;
  const HalfSpaceProblem single(one, Eigen::VectorXd::Constant(1, 2.0));
  Eigen::MatrixXd two(2, 2);
  two << 0.6, 0.8, 0.6, 0.8;
  const HalfSpaceProblem dup(two, Eigen::VectorXd::Constant(2, 1.0));
  aloe::RandomStream rs(22);
  for (int t = 0; t < 2000; ++t) {
    REQUIRE(aloe::conditional_draw(single, 0, rs).count == 1);
    REQUIRE(aloe::conditional_draw(dup, static_cast<std::size_t>(t % 2), rs).count == 2);
  }
}

TEST_CASE("derived probabilities and bounds") {
  const HalfSpaceProblem p = random_problem(8, 3, 30, 2.0);
  double sum = 0.0;
  double mx = 0.0;
  for (Eigen::Index j = 0; j < 8; ++j) {
    const double pj = aloe::stat::normal_cdf(-p.thresholds()(j));
    CHECK(p.probabilities()[static_cast<std::size_t>(j)] == pj);
    CHECK(std::abs(p.normals().row(j).norm() - 1.0) < 1e-12);
    sum += pj;
    mx = std::max(mx, pj);
  }
  CHECK(p.union_bound() == doctest::Approx(sum).epsilon(1e-14));
  CHECK(p.lower_bound() == mx);
  const auto mc = aloe::oracle::plain_mc(p, 400000, 31);
  CHECK(mc.mu + 4.0 * mc.se >= p.lower_bound());
  CHECK(mc.mu - 4.0 * mc.se <= p.union_bound());
}

TEST_CASE("normals are renormalized or rejected") {
  Eigen::MatrixXd slightly(1, 2);
  slightly << 0.6 * (1 + 5e-7), 0.8 * (1 + 5e-7);
  const HalfSpaceProblem ok(slightly, Eigen::VectorXd::Zero(1));
  CHECK(std::abs(ok.normals().row(0).norm() - 1.0) < 1e-15);
  Eigen::MatrixXd off(1, 2);
  off << 0.6 * 1.01, 0.8 * 1.01;
  CHECK_THROWS_AS(HalfSpaceProblem(off, Eigen::VectorXd::Zero(1)), aloe::Error);
  CHECK_THROWS_AS(HalfSpaceProblem(slightly, Eigen::VectorXd::Zero(2)), aloe::Error);
  CHECK_THROWS_AS(HalfSpaceProblem(slightly, Eigen::VectorXd::Constant(1, std::nan(""))), aloe::Error);
}

TEST_CASE("rare constraints are dropped and their mass reported") {
  Eigen::MatrixXd omega(3, 2);
  omega << 1, 0, 0, 1, -1, 0;
  Eigen::VectorXd tau(3);
  tau << 3.0, 38.2, 1e10;
  const HalfSpaceProblem p(omega, tau);
  CHECK(p.constraint_count() == 3);
  CHECK(p.size() == 1);
  CHECK(p.dropped_constraints() == std::vector<std::size_t>{1, 2});
  CHECK(p.dropped_probability() > 0.0);
  CHECK(p.dropped_probability() == aloe::stat::normal_cdf(-38.2));
  CHECK(p.union_bound() == aloe::stat::normal_cdf(-3.0));

  const HalfSpaceProblem keep(omega, tau, 39.0);
  CHECK(keep.size() == 2);
}
