#include "aloe/event_system.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace aloe {

std::size_t EventSystem::count(std::span<const double> x) const {
  std::vector<unsigned char> hits(size());
  mark(x, hits);
  return static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
}

std::size_t EventSystem::count_given(std::size_t j, std::span<const double> x) const {
  std::vector<unsigned char> hits(size());
  mark(x, hits);
  hits[j] = 1;
  return static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
}

void EventSystem::count_given_block(std::span<const std::size_t> given, const Eigen::MatrixXd& points,
                                    std::span<std::size_t> counts) const {
  for (std::size_t b = 0; b < given.size(); ++b) {
    const auto column = points.col(static_cast<Eigen::Index>(b));
    counts[b] = count_given(given[b], std::span<const double>(column.data(), column.size()));
  }
}

double EventSystem::union_bound() const {
  const auto p = probabilities();
  return std::accumulate(p.begin(), p.end(), 0.0);
}

double EventSystem::lower_bound() const {
  const auto p = probabilities();
  return p.empty() ? 0.0 : *std::max_element(p.begin(), p.end());
}

}  // namespace aloe
