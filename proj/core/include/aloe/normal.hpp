#pragma once

#include <span>

#include "aloe/random.hpp"

namespace aloe::stat {

/// exp(x^2) * erfc(x) for x >= 0, accurate to a few ulp over the whole range.
double scaled_erfc(double x);

/// Mills ratio Phi(-x) / phi(x) for x >= 0.
double mills_ratio(double x);

double normal_pdf(double t);

/// Standard normal CDF. Relative accuracy holds in the lower tail down to the
/// point where the result leaves the normal double range; returns exactly 0 once
/// the true value underflows.
double normal_cdf(double t);

/// log Phi(t), finite for every finite t (no underflow in the lower tail).
double log_normal_cdf(double t);

/// Phi^{-1}(p) for 0 < p < 1. Throws Error(kDomain) otherwise.
double normal_quantile(double p);

/// Phi^{-1}(exp(log_p)) for log_p < 0; works far below the double underflow
/// threshold of p itself.
double normal_quantile_log(double log_p);

/// Standard normal conditioned on y >= tau, computed as
/// -Phi^{-1}(u * Phi(-tau)) with the product formed in log space.
/// Throws Error(kUnsampleableEvent) when Phi(-tau) underflows to zero.
double sample_upper_truncated_normal(double tau, double u);

/// x ~ N(0, I) conditioned on omega^T x >= tau, written into `out`.
/// Uses the rank-one form x = omega*y + z - omega*(omega^T z).
void sample_halfspace_conditional(std::span<const double> omega, double tau,
                                  RandomStream& stream, std::span<double> out);

}  // namespace aloe::stat
