#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aloe/event_system.hpp"

namespace aloe {

/// Constraints with tau above this are treated as impossible: Phi(-tau) is
/// subnormal or zero there.
inline constexpr double kDefaultDropTau = 38.0;

/// Union of half-spaces H_j = {x : omega_j^T x >= tau_j} under x ~ N(0, I_d).
///
/// Every constraint is kept in the description. Constraints whose tau exceeds
/// the drop threshold, or whose P_j = Phi(-tau_j) underflows, are "dropped":
/// they take no part in sampling, counting or the union bound, and their
/// probability mass is reported separately by dropped_probability().
class HalfSpaceProblem final : public EventSystem {
 public:
  /// `normals` is J x d, one normal per row. Rows are re-normalized; a row whose
  /// norm is off by more than 1e-6 is rejected with Error(kInvalidInput).
  HalfSpaceProblem(const Eigen::MatrixXd& normals, const Eigen::VectorXd& thresholds,
                   double drop_tau = kDefaultDropTau);

  // Full description.
  std::size_t constraint_count() const noexcept { return static_cast<std::size_t>(tau_.size()); }
  const Eigen::MatrixXd& normals() const noexcept { return omega_; }
  const Eigen::VectorXd& thresholds() const noexcept { return tau_; }
  /// Phi(-tau_j) for every constraint, including dropped ones.
  const std::vector<double>& constraint_probabilities() const noexcept { return all_prob_; }
  /// Constraint indices of the active events, in order.
  const std::vector<std::size_t>& active_constraints() const noexcept { return active_; }
  const std::vector<std::size_t>& dropped_constraints() const noexcept { return dropped_; }
  double dropped_probability() const noexcept { return dropped_mass_; }
  double drop_tau() const noexcept { return drop_tau_; }

  // EventSystem over the active constraints.
  std::size_t size() const override { return active_.size(); }
  std::size_t dimension() const override { return static_cast<std::size_t>(omega_.cols()); }
  std::span<const double> probabilities() const override { return prob_; }
  void draw_given(std::size_t j, RandomStream& stream, std::span<double> x) const override;
  void mark(std::span<const double> x, std::span<unsigned char> hits) const override;
  std::size_t count(std::span<const double> x) const override;
  void count_given_block(std::span<const std::size_t> given, const Eigen::MatrixXd& points,
                         std::span<std::size_t> counts) const override;

 private:
  Eigen::MatrixXd omega_;
  Eigen::VectorXd tau_;
  double drop_tau_;
  std::vector<double> all_prob_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> dropped_;
  double dropped_mass_ = 0.0;
  // Active rows only, row-major so each normal is contiguous.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> active_omega_;
  Eigen::VectorXd active_tau_;
  std::vector<double> prob_;
};

/// S(x) = #{active j : omega_j^T x >= tau_j}, one matrix-vector product.
std::size_t event_count(const HalfSpaceProblem& problem, std::span<const double> x);

struct ConditionalDraw {
  std::vector<double> x;
  std::size_t count;
};

/// x ~ q_j for active event j together with S(x) >= 1.
ConditionalDraw conditional_draw(const HalfSpaceProblem& problem, std::size_t j, RandomStream& stream);

/// y ~ N(eta, Sigma) with events gamma_j^T y >= kappa_j.
struct GeneralGaussianSpec {
  Eigen::VectorXd eta;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd gamma;  ///< J x d, one constraint per row.
  Eigen::VectorXd kappa;
};

/// Symmetric PSD square root of a covariance matrix.
struct CovarianceRoot {
  Eigen::MatrixXd root;
  Eigen::VectorXd eigenvalues;  ///< after clipping negatives to zero
  double largest_eigenvalue = 0.0;
};

/// Validates symmetry (1e-10 relative) and PSD-ness (eigenvalues >= -1e-10 * max)
/// and returns Sigma^{1/2}. Throws Error(kInvalidInput).
CovarianceRoot covariance_root(const Eigen::MatrixXd& sigma);

/// Per-constraint whitening result; variance = gamma^T Sigma gamma.
struct WhitenedRow {
  Eigen::VectorXd omega;
  double tau = 0.0;
  double variance = 0.0;
  /// variance <= 1e-12 * lambda_max * |gamma|^2: the constraint lives in the
  /// (near-)null space of Sigma and is effectively deterministic.
  bool degenerate = false;
};

WhitenedRow whiten_row(const CovarianceRoot& root, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& gamma, double kappa);

/// Standardizes a general Gaussian problem:
///   omega_j = Sigma^{1/2} gamma_j / sqrt(gamma_j^T Sigma gamma_j)
///   tau_j   = (kappa_j - gamma_j^T eta) / sqrt(gamma_j^T Sigma gamma_j)
/// Throws Error(kDegenerateConstraint) when gamma_j^T Sigma gamma_j == 0 and
/// Error(kNearSingularCovariance) when it is positive but below the 1e-12
/// eigenvalue-ratio floor.
HalfSpaceProblem whiten(const GeneralGaussianSpec& spec, double drop_tau = kDefaultDropTau);

}  // namespace aloe
