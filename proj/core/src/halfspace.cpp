#include "aloe/halfspace.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "aloe/error.hpp"
#include "aloe/normal.hpp"

namespace aloe {

HalfSpaceProblem::HalfSpaceProblem(const Eigen::MatrixXd& normals, const Eigen::VectorXd& thresholds,
                                   double drop_tau)
    : omega_(normals), tau_(thresholds), drop_tau_(drop_tau) {
  if (omega_.rows() != tau_.size()) {
    throw Error(ErrorCode::kInvalidInput, "normals and thresholds disagree on the number of constraints");
  }
  if (omega_.cols() == 0) throw Error(ErrorCode::kInvalidInput, "dimension must be at least 1");
  const auto rows = omega_.rows();
  all_prob_.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (!omega_.row(j).allFinite()) {
      throw Error(ErrorCode::kInvalidInput, "normal " + std::to_string(j) + " is not finite");
    }
    const double norm = omega_.row(j).norm();
    if (std::abs(norm - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidInput,
                  "normal " + std::to_string(j) + " has norm " + std::to_string(norm) + ", expected 1");
    }
    omega_.row(j) /= norm;
    const double t = tau_(j);
    if (std::isnan(t) || t == -std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvalidInput, "threshold " + std::to_string(j) + " is not usable");
    }
    const double p = std::isinf(t) ? 0.0 : stat::normal_cdf(-t);
    all_prob_[static_cast<std::size_t>(j)] = p;
    if (t > drop_tau_ || p == 0.0) {
      dropped_.push_back(static_cast<std::size_t>(j));
      dropped_mass_ += p;
    } else {
      active_.push_back(static_cast<std::size_t>(j));
    }
  }
  const auto active = static_cast<Eigen::Index>(active_.size());
  active_omega_.resize(active, omega_.cols());
  active_tau_.resize(active);
  prob_.resize(active_.size());
  for (Eigen::Index k = 0; k < active; ++k) {
    const auto j = static_cast<Eigen::Index>(active_[static_cast<std::size_t>(k)]);
    active_omega_.row(k) = omega_.row(j);
    active_tau_(k) = tau_(j);
    prob_[static_cast<std::size_t>(k)] = all_prob_[static_cast<std::size_t>(j)];
  }
}

void HalfSpaceProblem::draw_given(std::size_t j, RandomStream& stream, std::span<double> x) const {
  const auto row = active_omega_.row(static_cast<Eigen::Index>(j));
  stat::sample_halfspace_conditional(std::span<const double>(row.data(), row.size()),
                                     active_tau_(static_cast<Eigen::Index>(j)), stream, x);
}

void HalfSpaceProblem::mark(std::span<const double> x, std::span<unsigned char> hits) const {
  const Eigen::Map<const Eigen::VectorXd> point(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd projections = active_omega_ * point;
  for (Eigen::Index k = 0; k < projections.size(); ++k) {
    hits[static_cast<std::size_t>(k)] = projections(k) >= active_tau_(k) ? 1 : 0;
  }
}

std::size_t HalfSpaceProblem::count(std::span<const double> x) const {
  const Eigen::Map<const Eigen::VectorXd> point(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd projections = active_omega_ * point;
  return static_cast<std::size_t>((projections.array() >= active_tau_.array()).count());
}

void HalfSpaceProblem::count_given_block(std::span<const std::size_t> given, const Eigen::MatrixXd& points,
                                         std::span<std::size_t> counts) const {
  const Eigen::MatrixXd projections = active_omega_ * points.leftCols(static_cast<Eigen::Index>(given.size()));
  for (std::size_t b = 0; b < given.size(); ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    const auto own = static_cast<Eigen::Index>(given[b]);
    std::size_t s = 1;
    for (Eigen::Index k = 0; k < projections.rows(); ++k) {
      if (k != own && projections(k, col) >= active_tau_(k)) ++s;
    }
    counts[b] = s;
  }
}

std::size_t event_count(const HalfSpaceProblem& problem, std::span<const double> x) {
  if (x.size() != problem.dimension()) {
    throw Error(ErrorCode::kInvalidInput, "point has the wrong dimension");
  }
  return problem.count(x);
}

ConditionalDraw conditional_draw(const HalfSpaceProblem& problem, std::size_t j, RandomStream& stream) {
  if (j >= problem.size()) throw Error(ErrorCode::kInvalidInput, "event index out of range");
  ConditionalDraw draw{std::vector<double>(problem.dimension()), 0};
  problem.draw_given(j, stream, draw.x);
  draw.count = problem.count_given(j, draw.x);
  return draw;
}

}  // namespace aloe
