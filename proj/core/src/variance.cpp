#include "aloe/variance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aloe/error.hpp"

namespace aloe {

VarianceIdentity theoretical_variance(std::span<const double> mass, double mu_bar) {
  if (!(mu_bar > 0.0) || !std::isfinite(mu_bar)) {
    throw Error(ErrorCode::kInvalidDistribution, "union bound must be positive and finite");
  }
  VarianceIdentity out;
  double inverse_moment = 0.0;  // sum T_s / s
  for (std::size_t s = 1; s <= mass.size(); ++s) {
    const double t = mass[s - 1];
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::kInvalidDistribution, "mass at s = " + std::to_string(s) + " is invalid");
    }
    out.mu += t;
    out.mu_bar_from_mass += static_cast<double>(s) * t;
    inverse_moment += t / static_cast<double>(s);
  }
  if (out.mu > 1.0 + 1e-12) throw Error(ErrorCode::kInvalidDistribution, "total mass exceeds 1");

  out.variance = mu_bar * inverse_moment - out.mu * out.mu;
  out.product_moment = out.mu_bar_from_mass * inverse_moment - out.mu * out.mu;
  out.consistent = std::abs(mu_bar - out.mu_bar_from_mass) <= 1e-12 * mu_bar;
  if (out.consistent) {
    const double scale = mu_bar * inverse_moment;
    if (std::abs(out.variance - out.product_moment) > 1e-12 * scale) {
      throw std::logic_error("variance identity forms disagree");
    }
  }
  return out;
}

double lemma_bound(std::size_t J) {
  if (J < 1) throw Error(ErrorCode::kDomain, "J must be at least 1");
  const double j = static_cast<double>(J);
  return (j + 1.0 / j + 2.0) / 4.0;
}

double interval_bound(double a, double b) {
  if (!(a > 0.0 && a <= b && std::isfinite(b))) throw Error(ErrorCode::kDomain, "need 0 < a <= b < inf");
  return (a / b + b / a + 2.0) / 4.0;
}

double product_moment(std::span<const double> weights) {
  double total = 0.0, first = 0.0, inverse = 0.0;
  for (std::size_t s = 1; s <= weights.size(); ++s) {
    const double w = weights[s - 1];
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidDistribution, "negative weight");
    total += w;
    first += w * static_cast<double>(s);
    inverse += w / static_cast<double>(s);
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidDistribution, "weights sum to zero");
  return (first / total) * (inverse / total);
}

double product_moment(std::span<const double> support, std::span<const double> weights) {
  if (support.size() != weights.size()) throw Error(ErrorCode::kInvalidDistribution, "size mismatch");
  double total = 0.0, first = 0.0, inverse = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!(support[k] > 0.0) || !(weights[k] >= 0.0)) {
      throw Error(ErrorCode::kInvalidDistribution, "support must be positive and weights nonnegative");
    }
    total += weights[k];
    first += weights[k] * support[k];
    inverse += weights[k] / support[k];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidDistribution, "weights sum to zero");
  return (first / total) * (inverse / total);
}

}  // namespace aloe
