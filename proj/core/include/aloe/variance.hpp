#pragma once

#include <cstddef>
#include <span>

namespace aloe {

// Count distributions are passed as `mass[s-1] = Pr(S = s)` for s = 1..J; the
// mass at S = 0 is implied.

/// Exact one-sample variance of mu_bar / S(x) under ALOE sampling, in two forms:
///   direct:         mu_bar * sum_s T_s / s - mu^2
///   product moment: mu^2 (E(S | S>0) E(1/S | S>0) - 1), with E(S | S>0) taken from T
/// The forms coincide when mu_bar == sum_s s T_s; that agreement is checked
/// internally (std::logic_error on failure).
struct VarianceIdentity {
  double variance = 0.0;
  double product_moment = 0.0;
  double mu = 0.0;  ///< sum_s T_s
  double mu_bar_from_mass = 0.0;  ///< sum_s s T_s
  bool consistent = false;  ///< |mu_bar - sum_s s T_s| <= 1e-12 mu_bar
};

/// Throws Error(kInvalidDistribution) on negative/non-finite mass, total mass
/// above 1, or a non-positive union bound.
VarianceIdentity theoretical_variance(std::span<const double> mass, double mu_bar);

/// (J + 1/J + 2) / 4, the largest possible E(S) E(1/S) on {1..J}.
/// Throws Error(kDomain) for J < 1.
double lemma_bound(std::size_t J);

/// (a/b + b/a + 2) / 4 for a random variable confined to [a, b], 0 < a <= b.
double interval_bound(double a, double b);

/// E(S) E(1/S) for S on {1..J} with (unnormalized) weights[s-1].
double product_moment(std::span<const double> weights);

/// E(X) E(1/X) for X on the given positive support with (unnormalized) weights.
double product_moment(std::span<const double> support, std::span<const double> weights);

}  // namespace aloe
