#include "aloe/finite_sets.hpp"

#include <algorithm>
#include <cmath>

#include "aloe/error.hpp"

namespace aloe {

FiniteSetSystem::FiniteSetSystem(std::size_t universe, std::vector<std::vector<std::size_t>> sets)
    : sets_(std::move(sets)), membership_(universe) {
  if (universe == 0 || sets_.empty()) {
    throw Error(ErrorCode::kInvalidInput, "finite set system needs a universe and at least one set");
  }
  prob_.reserve(sets_.size());
  for (std::size_t j = 0; j < sets_.size(); ++j) {
    auto& set = sets_[j];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (std::size_t e : set) {
      if (e >= universe) throw Error(ErrorCode::kInvalidInput, "set element outside the universe");
      membership_[e].push_back(j);
    }
    prob_.push_back(static_cast<double>(set.size()) / static_cast<double>(universe));
  }
}

void FiniteSetSystem::draw_given(std::size_t j, RandomStream& stream, std::span<double> x) const {
  const auto& set = sets_[j];
  const auto k = std::min(set.size() - 1,
                          static_cast<std::size_t>(stream.uniform() * static_cast<double>(set.size())));
  x[0] = static_cast<double>(set[k]);
}

void FiniteSetSystem::mark(std::span<const double> x, std::span<unsigned char> hits) const {
  std::fill(hits.begin(), hits.end(), 0);
  for (std::size_t j : membership_[static_cast<std::size_t>(x[0])]) hits[j] = 1;
}

std::vector<double> FiniteSetSystem::exact_count_distribution() const {
  std::vector<double> t(sets_.size() + 1, 0.0);
  const double mass = 1.0 / static_cast<double>(universe());
  for (const auto& owners : membership_) t[owners.size()] += mass;
  return t;
}

double FiniteSetSystem::exact_union_probability() const {
  const auto covered = std::count_if(membership_.begin(), membership_.end(),
                                     [](const auto& owners) { return !owners.empty(); });
  return static_cast<double>(covered) / static_cast<double>(universe());
}

}  // namespace aloe
