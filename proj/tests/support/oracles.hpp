#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aloe/halfspace.hpp"
#include "aloe/power_grid.hpp"

namespace aloe::oracle {

// Reference computations that share no sampling or counting code with the
// estimator: they draw with std::mt19937_64 and test membership directly.

struct PlainMc {
  double mu = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  std::vector<std::uint64_t> count_histogram;  ///< [s] = #{draws with S = s}, s = 0..J
};

/// Plain Monte Carlo over x ~ N(0, I) for the active constraints of `problem`.
PlainMc plain_mc(const HalfSpaceProblem& problem, std::size_t n, std::uint64_t seed);

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// P(D_n > d) from the Kolmogorov limit distribution of sqrt(n) D_n.
double ks_pvalue(double d, std::size_t n);

/// Plain Monte Carlo for a DC network: p_R ~ N(eta_R, Sigma), phases from the
/// grounded-slack system solved once by LU, violation if any box, slack or
/// phase limit fails.
class GridMc {
 public:
  explicit GridMc(const grid::GridCase& grid);

  /// True when the network state implied by p_R violates a limit.
  bool violated(const Eigen::VectorXd& p_random) const;
  PlainMc run(std::size_t n, std::uint64_t seed) const;

 private:
  grid::GridCase grid_;
  std::vector<std::size_t> random_;  // positions of random buses
  std::size_t slack_ = 0;
  Eigen::VectorXd base_injection_;  // fixed injections, zero elsewhere
  Eigen::VectorXd eta_;
  Eigen::MatrixXd root_;
  Eigen::MatrixXd reduced_inverse_;  // inverse of B without the slack row/column
  std::vector<std::pair<std::size_t, std::size_t>> lines_;
  std::vector<double> p_min_;
  std::vector<double> p_max_;
};

/// Draws from the double-exponential law of S on {1..J} used by property tests.
std::vector<double> random_distribution(std::size_t J, std::uint64_t seed, std::size_t index);

}  // namespace aloe::oracle
