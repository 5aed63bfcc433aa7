#include <doctest.h>

#include <cmath>
#include <random>

#include "aloe/error.hpp"
#include "aloe/halfspace.hpp"
#include "aloe/normal.hpp"

using aloe::GeneralGaussianSpec;

namespace {

GeneralGaussianSpec random_spec(std::uint64_t seed, Eigen::Index d, Eigen::Index J) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  GeneralGaussianSpec s;
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = z(gen);
  s.sigma = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
  s.eta.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) s.eta(i) = z(gen);
  s.gamma.resize(J, d);
  for (Eigen::Index i = 0; i < s.gamma.size(); ++i) s.gamma.data()[i] = z(gen);
  s.kappa.resize(J);
  for (Eigen::Index j = 0; j < J; ++j) {
    const Eigen::VectorXd g = s.gamma.row(j).transpose();
    s.kappa(j) = g.dot(s.eta) + (1.0 + 0.5 * j) * std::sqrt(g.dot(s.sigma * g));
  }
  return s;
}

}  // namespace

TEST_CASE("identity whitening") {
  GeneralGaussianSpec s;
  s.eta = Eigen::VectorXd::Zero(3);
  s.sigma = Eigen::MatrixXd::Identity(3, 3);
  s.gamma.resize(2, 3);
  s.gamma << 1, 0, 0, 0, 0.6, 0.8;
  s.kappa.resize(2);
  s.kappa << 1.5, -0.5;
  const auto p = aloe::whiten(s);
  CHECK((p.normals() - s.gamma).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.thresholds() - s.kappa).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("scalar standardization") {
  GeneralGaussianSpec s;
  s.eta = Eigen::VectorXd::Constant(1, 1.0);
  s.sigma = Eigen::MatrixXd::Constant(1, 1, 4.0);
  s.gamma = Eigen::MatrixXd::Constant(1, 1, 1.0);
  s.kappa = Eigen::VectorXd::Constant(1, 5.0);
  const auto p = aloe::whiten(s);
  CHECK(p.normals()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.thresholds()(0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("whitened probabilities match plain sampling of y") {
  const GeneralGaussianSpec s = random_spec(5, 3, 3);
  const auto p = aloe::whiten(s);
  const aloe::CovarianceRoot root = aloe::covariance_root(s.sigma);
  std::mt19937_64 gen(6);
  std::normal_distribution<double> z;
  const int n = 1000000;
  std::vector<int> hits(3, 0);
  Eigen::VectorXd x(3);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < 3; ++k) x(k) = z(gen);
    const Eigen::VectorXd y = s.eta + root.root * x;
    for (Eigen::Index j = 0; j < 3; ++j) hits[static_cast<std::size_t>(j)] += s.gamma.row(j).dot(y) >= s.kappa(j) ? 1 : 0;
  }
  for (std::size_t j = 0; j < 3; ++j) {
    const double pj = aloe::stat::normal_cdf(-p.thresholds()(static_cast<Eigen::Index>(j)));
    const double est = hits[j] / static_cast<double>(n);
    CHECK(std::abs(est - pj) < 4.0 * std::sqrt(pj * (1 - pj) / n));
  }
}

TEST_CASE("conditional draws map back into the original constraint") {
  const GeneralGaussianSpec s = random_spec(7, 4, 5);
  const auto p = aloe::whiten(s);
  const aloe::CovarianceRoot root = aloe::covariance_root(s.sigma);
  aloe::RandomStream rs(8);
  std::size_t failures = 0;
  for (int i = 0; i < 100000; ++i) {
    const std::size_t j = static_cast<std::size_t>(i % 5);
    const auto draw = aloe::conditional_draw(p, j, rs);
    const Eigen::VectorXd y = s.eta + root.root * Eigen::Map<const Eigen::VectorXd>(draw.x.data(), 4);
    const double lhs = s.gamma.row(static_cast<Eigen::Index>(j)).dot(y);
    const double kappa = s.kappa(static_cast<Eigen::Index>(j));
    if (lhs < kappa - 1e-9 * std::max(1.0, std::abs(kappa))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("mean shifts move thresholds only") {
  const GeneralGaussianSpec s = random_spec(9, 3, 4);
  GeneralGaussianSpec shifted = s;
  const Eigen::Vector3d delta(0.3, -1.2, 0.7);
  shifted.eta += delta;
  const auto a = aloe::whiten(s);
  const auto b = aloe::whiten(shifted);
  CHECK((a.normals() - b.normals()).cwiseAbs().maxCoeff() <= 1e-12);
  for (Eigen::Index j = 0; j < 4; ++j) {
    const Eigen::VectorXd g = s.gamma.row(j).transpose();
    const double expected = g.dot(delta) / std::sqrt(g.dot(s.sigma * g));
    CHECK(std::abs((a.thresholds()(j) - b.thresholds()(j)) - expected) < 1e-12);
  }
}

TEST_CASE("covariance validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(aloe::covariance_root(asym), aloe::Error);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(aloe::covariance_root(indefinite), aloe::Error);
  Eigen::MatrixXd tiny_negative(2, 2);
  tiny_negative << 1, 1, 1, 1 - 1e-14;
  const auto r = aloe::covariance_root(tiny_negative);
  CHECK(r.eigenvalues.minCoeff() >= 0.0);
  CHECK((r.root * r.root - tiny_negative).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rank-deficient covariance") {
  GeneralGaussianSpec s;
  s.eta = Eigen::VectorXd::Zero(2);
  s.sigma = Eigen::MatrixXd::Zero(2, 2);
  s.sigma(0, 0) = 1.0;
  s.gamma.resize(1, 2);
  s.kappa = Eigen::VectorXd::Constant(1, 1.0);

  s.gamma << 2.0, 0.0;
  auto p = aloe::whiten(s);
  CHECK(p.thresholds()(0) == doctest::Approx(0.5));

  s.gamma << 0.0, 1.0;
  try {
    aloe::whiten(s);
    FAIL("expected an error");
  } catch (const aloe::Error& e) {
    CHECK(e.code() == aloe::ErrorCode::kDegenerateConstraint);
  }

  s.sigma(1, 1) = 1e-14;
  try {
    aloe::whiten(s);
    FAIL("expected an error");
  } catch (const aloe::Error& e) {
    CHECK(e.code() == aloe::ErrorCode::kNearSingularCovariance);
  }
}
