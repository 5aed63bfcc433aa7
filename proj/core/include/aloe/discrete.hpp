#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aloe/random.hpp"

namespace aloe {

/// Draws index j with probability w_j / sum(w) by binary search over the
/// cumulative weights. Zero-weight indices are never returned.
class DiscreteSampler {
 public:
  /// Throws Error(kInvalidWeights) on negative/non-finite weights or zero total.
  explicit DiscreteSampler(std::span<const double> weights);

  std::size_t draw(RandomStream& stream) const;
  std::size_t size() const noexcept { return cumulative_.size(); }
  double total() const noexcept { return cumulative_.back(); }
  double probability(std::size_t j) const;

 private:
  std::vector<double> cumulative_;
  std::size_t last_positive_ = 0;
};

inline std::size_t discrete_draw(const DiscreteSampler& sampler, RandomStream& stream) {
  return sampler.draw(stream);
}

}  // namespace aloe
