#pragma once

#include <cstddef>
#include <vector>

#include "aloe/event_system.hpp"

namespace aloe {

/// Events given as subsets of a finite universe {0, ..., universe-1} carrying
/// the uniform distribution (the union-cardinality setting). A point is a
/// single element stored as x[0]. Every quantity (T_s, mu) is enumerable, which
/// makes this the exact oracle system for the variance identities.
class FiniteSetSystem final : public EventSystem {
 public:
  /// Throws Error(kInvalidInput) on out-of-range elements. Duplicates inside a
  /// set are removed. Empty sets are allowed and get P_j = 0.
  FiniteSetSystem(std::size_t universe, std::vector<std::vector<std::size_t>> sets);

  std::size_t size() const override { return sets_.size(); }
  std::size_t dimension() const override { return 1; }
  std::span<const double> probabilities() const override { return prob_; }
  void draw_given(std::size_t j, RandomStream& stream, std::span<double> x) const override;
  void mark(std::span<const double> x, std::span<unsigned char> hits) const override;

  std::size_t universe() const noexcept { return membership_.size(); }
  /// Exact Pr(S = s) for s = 0..J under the uniform law.
  std::vector<double> exact_count_distribution() const;
  /// Exact probability of the union.
  double exact_union_probability() const;

 private:
  std::vector<std::vector<std::size_t>> sets_;
  std::vector<std::vector<std::size_t>> membership_;  // element -> sets containing it
  std::vector<double> prob_;
};

}  // namespace aloe
