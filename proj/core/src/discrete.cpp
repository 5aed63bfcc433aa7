#include "aloe/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "aloe/error.hpp"

namespace aloe {

DiscreteSampler::DiscreteSampler(std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorCode::kInvalidWeights, "no weights");
  cumulative_.reserve(weights.size());
  double running = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidWeights, "weights must be finite and nonnegative");
    }
    if (w > 0.0) last_positive_ = j;
    running += w;
    cumulative_.push_back(running);
  }
  if (!(running > 0.0) || !std::isfinite(running)) {
    throw Error(ErrorCode::kInvalidWeights, "weights must have a positive finite total");
  }
}

std::size_t DiscreteSampler::draw(RandomStream& stream) const {
  const double target = stream.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto j = static_cast<std::size_t>(it - cumulative_.begin());
  return std::min(j, last_positive_);
}

double DiscreteSampler::probability(std::size_t j) const {
  const double lower = j == 0 ? 0.0 : cumulative_[j - 1];
  return (cumulative_[j] - lower) / cumulative_.back();
}

}  // namespace aloe
