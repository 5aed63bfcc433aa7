#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aloe/event_system.hpp"
#include "aloe/random.hpp"

namespace aloe {

struct EstimatorOptions {
  /// Samples per block. Blocks batch the event-count product; results do not
  /// depend on this value because each sample owns its random substream.
  std::size_t block_size = 1024;
  std::size_t threads = 1;
};

/// Result of one ALOE run: mu_hat = (mu_bar / n) * sum_i 1 / S(x_i).
struct AloeEstimate {
  double mu_hat = 0.0;
  std::size_t n = 0;
  double se = 0.0;  ///< sample sd of mu_bar/S(x_i) (n-1 divisor) over sqrt(n)
  double union_bound = 0.0;
  double lower_bound = 0.0;
  std::size_t events = 0;  ///< J
  std::array<double, 2> hard_range{};  ///< [mu_bar/J, mu_bar]
  std::vector<std::uint64_t> s_histogram;  ///< s_histogram[s-1] = #{i : S(x_i) = s}
  double var_bound_theorem = 0.0;  ///< mu_hat (mu_bar - mu_hat) / n
  double var_bound_lemma = 0.0;  ///< mu_hat^2 (J + 1/J - 2) / (4n)
  double cv_bound = 0.0;  ///< min(sqrt(mu_bar/mu_lower - 1), sqrt(J-1)) / sqrt(n)
  std::uint64_t seed = 0;
  std::uint32_t stream_id = 0;
  bool degenerate_se = false;  ///< every draw had the same S, so se == 0
  std::vector<std::string> warnings;

  double se_over_mu() const { return mu_hat > 0.0 ? se / mu_hat : 0.0; }
  double s_ge_2_fraction() const;
  bool within_hard_range() const { return hard_range[0] <= mu_hat && mu_hat <= hard_range[1]; }
};

/// ALOE with the balanced mixture alpha_j = P_j / mu_bar. Sample i draws from
/// RandomStream(seed, stream_id, i) of the supplied stream, so the result is a
/// pure function of (system, n, seed, stream_id).
/// Throws Error(kEmptyMixture) if mu_bar == 0, Error(kInvalidInput) if n == 0.
AloeEstimate estimate(const EventSystem& system, std::size_t n, const RandomStream& stream,
                      const EstimatorOptions& options = {});

struct SubEventEstimate {
  double nu_hat = 0.0;
  double se = 0.0;
  std::size_t n = 0;
  std::size_t hits = 0;  ///< draws with f(x) = 1
  double union_bound = 0.0;
};

/// Indicator of a sub-event of the union. Must be callable concurrently.
using PointPredicate = std::function<bool(std::span<const double>)>;

/// nu_hat = (mu_bar / n) * sum_i f(x_i) / S(x_i), same draws as estimate().
SubEventEstimate estimate_subevent(const EventSystem& system, const PointPredicate& f, std::size_t n,
                                   const RandomStream& stream, const EstimatorOptions& options = {});

struct MixtureEstimate {
  double mu_hat = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Mixture importance sampling with arbitrary weights alpha; each draw
/// contributes 1 / sum_j alpha_j H_j(x) / P_j. Weights are renormalized; they
/// must be nonnegative, vanish wherever P_j = 0 and not all be zero, otherwise
/// Error(kInvalidWeights).
MixtureEstimate estimate_general_mixture(const EventSystem& system, std::span<const double> weights,
                                         std::size_t n, const RandomStream& stream,
                                         const EstimatorOptions& options = {});

/// Single-draw integrand of the general mixture estimator at x.
double mixture_integrand(std::span<const double> alpha, std::span<const double> probabilities,
                         std::span<const unsigned char> hits);

struct MomentCheck {
  int k = 1;
  double empirical = 0.0;  ///< mean of (mu_bar / S)^k over ALOE draws
  double empirical_se = 0.0;
  double predicted = 0.0;  ///< sum_s T_s (mu_bar / s)^(k-1)
  double predicted_se = 0.0;  ///< multinomial se of `predicted` when T came from N plain draws
  double combined_se() const;
};

/// Compares both sides of E((mu_bar/S)^k) = sum_s T_s (mu_bar/s)^(k-1).
/// `count_mass[s-1]` is Pr(S = s) for s = 1..J from an independent source;
/// `count_mass_samples` is the plain Monte Carlo size behind it (0 if exact).
MomentCheck moment_identity_check(const EventSystem& system, int k, std::span<const double> count_mass,
                                  std::size_t count_mass_samples, std::size_t n,
                                  const RandomStream& stream, const EstimatorOptions& options = {});

/// Empirical k-th moment of mu_bar/S and its standard error from a histogram.
std::array<double, 2> histogram_moment(std::span<const std::uint64_t> s_histogram, double mu_bar, int k);

}  // namespace aloe
