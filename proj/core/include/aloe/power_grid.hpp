#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "aloe/halfspace.hpp"

namespace aloe::grid {

enum class BusRole { kFixed, kRandom, kSlack };

struct Bus {
  int id = 0;
  BusRole role = BusRole::kFixed;
  double p_min = -std::numeric_limits<double>::infinity();
  double p_max = std::numeric_limits<double>::infinity();
  double eta = 0.0;  ///< fixed injection (fixed) or mean injection (random); unused for slack
};

struct Line {
  int from = 0;
  int to = 0;
  double susceptance = 1.0;
};

/// DC network: injections p = (p_R random, p_F = eta_F fixed, p_S slack) with
/// p_R ~ N(eta_R, sigma) and p_S = -sum(p_R) - sum(p_F). Matrices index buses by
/// ascending id; sigma rows/columns follow the random buses by ascending id.
struct GridCase {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  Eigen::MatrixXd sigma;
  double theta_bar = 0.0;
};

/// Bus bookkeeping derived from a case.
struct BusLayout {
  std::vector<int> ids;  ///< ascending
  std::vector<std::size_t> random;  ///< positions (into ids) of random buses
  std::vector<std::size_t> fixed;
  std::size_t slack = 0;
  std::size_t position(int id) const;
};

/// Checks roles (exactly one slack, at least one random bus), line endpoints,
/// susceptances, sigma shape and theta_bar. Throws Error(kInvalidInput).
BusLayout validate(const GridCase& grid);

/// Weighted Laplacian: B_ij = -sum of b over lines i-j, B_ii = -sum_{j != i} B_ij.
/// Throws Error(kDisconnectedNetwork) if the network is not connected.
Eigen::MatrixXd build_laplacian(const GridCase& grid);

/// Moore-Penrose inverse of a symmetric matrix by eigendecomposition;
/// eigenvalues at or below N * eps * lambda_max are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& symmetric);

/// M x N incidence matrix: +1 at the `from` bus, -1 at the `to` bus.
Eigen::MatrixXd build_incidence(const GridCase& grid);

enum class RowKind { kBusUpper, kBusLower, kSlackLower, kSlackUpper, kPhaseForward, kPhaseBackward };

const char* to_string(RowKind kind) noexcept;

struct RowLabel {
  RowKind kind = RowKind::kBusUpper;
  int bus_id = -1;  ///< bus rows
  int line = -1;  ///< phase rows: index into GridCase::lines
};

/// Gamma p_R <= Kappa with 2 N_R + 2 + 2 M rows, in block order
///   [ I_R; -I_R; 1^T; -1^T; A; -A ],  A = D (B+[:,R] - B+[:,S] 1^T).
/// Infinite bounds give rows with kappa = +inf.
struct ConstraintSystem {
  Eigen::MatrixXd gamma;
  Eigen::VectorXd kappa;
  std::vector<RowLabel> labels;
  std::vector<int> random_bus_ids;
  Eigen::VectorXd eta_random;
};

ConstraintSystem assemble_constraints(const GridCase& grid);

/// Whitened violation events for ALOE plus the bookkeeping of dropped rows.
struct GridProblem {
  HalfSpaceProblem problem;
  std::vector<std::size_t> rows;  ///< constraint-system row behind each problem constraint
  std::vector<std::size_t> deterministic_rows;  ///< zero variance, satisfied at the mean
  std::vector<std::size_t> unbounded_rows;  ///< kappa = +inf
};

/// Violation of row j is gamma_j^T p_R > kappa_j. Rows with zero variance are
/// checked at the mean: if violated, Error(kInfeasibleDeterministicConstraint),
/// otherwise dropped.
GridProblem to_halfspace_problem(const ConstraintSystem& system, const GridCase& grid,
                                 double drop_tau = kDefaultDropTau);

/// Injections and phases from a direct DC solve with the slack bus grounded
/// (theta_slack = 0), independent of the pseudo-inverse.
struct DcFlow {
  Eigen::VectorXd injections;  ///< by ascending bus id
  Eigen::VectorXd phases;
  double slack_injection = 0.0;
};

DcFlow solve_dc_flow(const GridCase& grid, const Eigen::VectorXd& p_random);

/// Direct physical check: random bus boxes, slack bounds and |theta_i - theta_j|
/// <= theta_bar on every line, each with additive slack `tolerance`.
bool physically_feasible(const GridCase& grid, const Eigen::VectorXd& p_random, double tolerance = 0.0);

}  // namespace aloe::grid
