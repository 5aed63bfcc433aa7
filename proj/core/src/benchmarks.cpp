#include "aloe/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aloe/error.hpp"
#include "aloe/normal.hpp"
#include "aloe/random.hpp"

namespace aloe {

std::vector<std::size_t> primes_up_to(std::size_t limit) {
  std::vector<std::size_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::size_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::size_t k = i * i; k <= limit; k += i) composite[k] = true;
  }
  return primes;
}

std::vector<double> polygon_angles(const PolygonSpec& spec) {
  if (spec.sides < 3) throw Error(ErrorCode::kInvalidSpec, "a polygon needs at least 3 sides");
  if (!(spec.tau > 0.0) || !std::isfinite(spec.tau)) {
    throw Error(ErrorCode::kInvalidSpec, "polygon radius must be positive");
  }
  const double turn = 2.0 * std::numbers::pi / static_cast<double>(spec.sides);
  std::vector<double> angles;
  if (spec.angles == AngleSet::kFull) {
    angles.reserve(spec.sides);
    for (std::size_t j = 1; j <= spec.sides; ++j) angles.push_back(turn * static_cast<double>(j));
  } else {
    if (spec.sides != 360) throw Error(ErrorCode::kInvalidSpec, "the prime-angle polygon is defined for 360");
    for (std::size_t p : primes_up_to(spec.sides - 1)) angles.push_back(turn * static_cast<double>(p));
  }
  return angles;
}

HalfSpaceProblem make_polygon(const PolygonSpec& spec, double drop_tau) {
  const std::vector<double> angles = polygon_angles(spec);
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(angles.size()), 2);
  for (std::size_t j = 0; j < angles.size(); ++j) {
    omega(static_cast<Eigen::Index>(j), 0) = std::sin(angles[j]);
    omega(static_cast<Eigen::Index>(j), 1) = std::cos(angles[j]);
  }
  return HalfSpaceProblem(omega, Eigen::VectorXd::Constant(omega.rows(), spec.tau), drop_tau);
}

double regular_gap_area(std::size_t sides, double tau) {
  const double j = static_cast<double>(sides);
  return (j * std::tan(std::numbers::pi / j) - std::numbers::pi) * tau * tau;
}

PolygonReference polygon_reference(const PolygonSpec& spec) {
  PolygonReference ref;
  ref.upper = std::exp(-0.5 * spec.tau * spec.tau);
  if (spec.angles == AngleSet::kFull) {
    polygon_angles(spec);  // validation only
    ref.gap_area = regular_gap_area(spec.sides, spec.tau);
  } else {
    // Each pair of neighbouring tangent points at angular distance g spans a
    // kite of area tau^2 tan(g/2).
    const std::vector<double> angles = polygon_angles(spec);
    double kites = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double next = k + 1 < angles.size() ? angles[k + 1] : angles.front() + 2.0 * std::numbers::pi;
      const double gap = next - angles[k];
      if (gap >= std::numbers::pi) {
        kites = std::numeric_limits<double>::infinity();
        break;
      }
      kites += std::tan(0.5 * gap);
    }
    ref.gap_area = (kites - std::numbers::pi) * spec.tau * spec.tau;
  }
  ref.lower = std::max(0.0, ref.upper * (1.0 - ref.gap_area / (2.0 * std::numbers::pi)));
  return ref;
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  const double magnitude = std::floor(std::log10(std::abs(value)));
  const double scale = std::pow(10.0, static_cast<double>(digits - 1) - magnitude);
  return std::round(value * scale) / scale;
}

double solve_shared_threshold(std::size_t count, double bound) {
  if (count == 0 || !(bound > 0.0) || !(bound < static_cast<double>(count))) {
    throw Error(ErrorCode::kInvalidSpec, "target union bound must lie in (0, J)");
  }
  const double target = std::log(bound) - std::log(static_cast<double>(count));
  double lo = -40.0, hi = 40.0;  // log Phi(-tau) decreases in tau
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (stat::log_normal_cdf(-mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

HighDimProblem make_highdim(const HighDimSpec& spec, double drop_tau) {
  if (spec.dimension < 2) throw Error(ErrorCode::kInvalidSpec, "dimension must be at least 2");
  if (spec.constraints < 1) throw Error(ErrorCode::kInvalidSpec, "need at least one constraint");
  const auto J = static_cast<Eigen::Index>(spec.constraints);
  const auto d = static_cast<Eigen::Index>(spec.dimension);
  RandomStream stream(spec.seed, 0);
  Eigen::MatrixXd omega(J, d);
  for (Eigen::Index j = 0; j < J; ++j) {
    double norm = 0.0;
    do {
      for (Eigen::Index k = 0; k < d; ++k) omega(j, k) = stream.normal();
      norm = omega.row(j).norm();
    } while (norm == 0.0);
    omega.row(j) /= norm;
  }
  const double target_bound = std::pow(10.0, -spec.target_log10_union_bound);
  const double rounded = round_significant(target_bound, 2);
  const double tau_unrounded = solve_shared_threshold(spec.constraints, target_bound);
  const double tau = solve_shared_threshold(spec.constraints, rounded);
  HalfSpaceProblem problem(omega, Eigen::VectorXd::Constant(J, tau), drop_tau);
  const double achieved = problem.union_bound();
  return HighDimProblem{std::move(problem), target_bound, rounded, tau_unrounded, tau, achieved};
}

std::vector<HighDimSpec> sample_highdim_family(std::size_t count, std::uint64_t seed,
                                               std::span<const std::size_t> dimensions) {
  if (dimensions.empty()) throw Error(ErrorCode::kInvalidSpec, "no dimensions to choose from");
  RandomStream stream(seed, 1);
  std::vector<HighDimSpec> specs;
  specs.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto pick = [&](std::size_t options) {
      return std::min(options - 1, static_cast<std::size_t>(stream.uniform() * static_cast<double>(options)));
    };
    HighDimSpec spec;
    spec.dimension = dimensions[pick(dimensions.size())];
    const std::size_t choices[] = {std::max<std::size_t>(1, spec.dimension / 2), spec.dimension,
                                   2 * spec.dimension};
    spec.constraints = choices[pick(3)];
    spec.target_log10_union_bound = 4.0 + 4.0 * stream.uniform();
    spec.seed = stream.next_u64();
    specs.push_back(spec);
  }
  return specs;
}

double independent_reference(std::span<const double> probabilities) {
  double log_none = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kDomain, "probabilities must lie in [0, 1]");
    log_none += std::log1p(-p);
  }
  return -std::expm1(log_none);
}

}  // namespace aloe
