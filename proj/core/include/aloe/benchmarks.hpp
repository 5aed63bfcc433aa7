#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "aloe/halfspace.hpp"

namespace aloe {

// --- Circumscribed polygon --------------------------------------------------

enum class AngleSet { kFull, kPrime };

/// Polygon circumscribed around the circle of radius tau. With AngleSet::kFull
/// the normals sit at angles 2*pi*j/sides, j = 1..sides; with AngleSet::kPrime
/// only the prime j < sides are used (sides must be 360, giving 72 normals).
struct PolygonSpec {
  std::size_t sides = 360;
  double tau = 6.0;
  AngleSet angles = AngleSet::kFull;
};

/// Primes p <= limit by sieve.
std::vector<std::size_t> primes_up_to(std::size_t limit);

/// Normal angles in radians, ascending. Throws Error(kInvalidSpec).
std::vector<double> polygon_angles(const PolygonSpec& spec);

/// d = 2 problem with omega_j = (sin a_j, cos a_j) and tau_j = tau.
HalfSpaceProblem make_polygon(const PolygonSpec& spec, double drop_tau = kDefaultDropTau);

/// Sandwich for Pr(x outside polygon): the disc gives the upper bound
/// exp(-tau^2/2); removing the gap between disc and polygon, where the density
/// is at most exp(-tau^2/2)/(2 pi), gives the lower bound.
struct PolygonReference {
  double upper = 0.0;
  double lower = 0.0;
  double gap_area = 0.0;
  double midpoint() const { return 0.5 * (upper + lower); }
};

PolygonReference polygon_reference(const PolygonSpec& spec);

/// (J tan(pi/J) - pi) tau^2, the gap area of the regular J-gon.
double regular_gap_area(std::size_t sides, double tau);

// --- Random high-dimensional half-spaces -------------------------------------

struct HighDimSpec {
  std::size_t dimension = 20;
  std::size_t constraints = 20;
  /// The union bound is targeted at 10^(-target_log10_union_bound).
  double target_log10_union_bound = 4.0;
  std::uint64_t seed = 0;
};

struct HighDimProblem {
  HalfSpaceProblem problem;
  double target_bound = 0.0;  ///< 10^(-target), before rounding
  double rounded_bound = 0.0;  ///< target_bound rounded to two significant figures
  double tau_unrounded = 0.0;  ///< shared threshold solving J Phi(-tau) = target_bound
  double tau = 0.0;  ///< shared threshold solving J Phi(-tau) = rounded_bound (used)
  double achieved_union_bound = 0.0;
};

/// J i.i.d. uniform unit normals in R^d (normalized Gaussian draws) and one
/// shared threshold found by bisection. Throws Error(kInvalidSpec).
HighDimProblem make_highdim(const HighDimSpec& spec, double drop_tau = kDefaultDropTau);

/// Specs drawn like the random family: d uniform over `dimensions`, J uniform
/// over {d/2, d, 2d}, target uniform on [4, 8].
std::vector<HighDimSpec> sample_highdim_family(std::size_t count, std::uint64_t seed,
                                               std::span<const std::size_t> dimensions);

/// Pr(at least one) for independent events: 1 - prod(1 - P_j), evaluated as
/// -expm1(sum log1p(-P_j)). Throws Error(kDomain) for P_j outside [0, 1].
double independent_reference(std::span<const double> probabilities);

/// Round to `digits` significant decimal figures.
double round_significant(double value, int digits);

/// Solves sum_j Phi(-tau) = bound for a shared tau over `count` events by
/// bisection on the log scale.
double solve_shared_threshold(std::size_t count, double bound);

}  // namespace aloe
