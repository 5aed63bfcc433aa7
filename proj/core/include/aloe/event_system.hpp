#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "aloe/random.hpp"

namespace aloe {

/// A finite collection of events H_1..H_J on a common sample space with a
/// known probability P_j for each, the ability to sample conditionally on any
/// single event, and the ability to tell which events occur at a point.
///
/// Points are dense vectors of length dimension(). Implementations must be
/// safe to share read-only between threads.
class EventSystem {
 public:
  virtual ~EventSystem() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dimension() const = 0;

  /// P_1..P_J. Entries equal to zero are excluded from the sampling mixture.
  virtual std::span<const double> probabilities() const = 0;

  /// Writes a draw from the law of x given H_j into `x`. Requires P_j > 0.
  virtual void draw_given(std::size_t j, RandomStream& stream, std::span<double> x) const = 0;

  /// Indicator of every event at x.
  virtual void mark(std::span<const double> x, std::span<unsigned char> hits) const = 0;

  /// S(x) = number of events occurring at x.
  virtual std::size_t count(std::span<const double> x) const;

  /// S for a point drawn given H_j: H_j is counted as occurring whatever the
  /// rounding in the membership test says.
  virtual std::size_t count_given(std::size_t j, std::span<const double> x) const;

  /// count_given for a block of points stored as the columns of `points`.
  virtual void count_given_block(std::span<const std::size_t> given, const Eigen::MatrixXd& points,
                                 std::span<std::size_t> counts) const;

  double union_bound() const;
  double lower_bound() const;
};

}  // namespace aloe
