#include "aloe/halfspace.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "aloe/error.hpp"

namespace aloe {

CovarianceRoot covariance_root(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(ErrorCode::kInvalidInput, "covariance must be a non-empty square matrix");
  }
  if (!sigma.allFinite()) throw Error(ErrorCode::kInvalidInput, "covariance has non-finite entries");
  const double scale = sigma.cwiseAbs().maxCoeff();
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::kInvalidInput, "covariance is not symmetric");
  }
  const Eigen::MatrixXd symmetric = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidInput, "eigendecomposition of the covariance failed");
  }
  CovarianceRoot out;
  out.eigenvalues = solver.eigenvalues();
  out.largest_eigenvalue = std::max(0.0, out.eigenvalues.maxCoeff());
  if (out.eigenvalues.minCoeff() < -1e-10 * out.largest_eigenvalue) {
    throw Error(ErrorCode::kInvalidInput, "covariance is not positive semidefinite");
  }
  out.eigenvalues = out.eigenvalues.cwiseMax(0.0);
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  out.root = vectors * out.eigenvalues.cwiseSqrt().asDiagonal() * vectors.transpose();
  return out;
}

WhitenedRow whiten_row(const CovarianceRoot& root, const Eigen::VectorXd& eta,
                       const Eigen::VectorXd& gamma, double kappa) {
  WhitenedRow row;
  const Eigen::VectorXd scaled = root.root * gamma;
  row.variance = scaled.squaredNorm();
  row.degenerate = row.variance <= 1e-12 * root.largest_eigenvalue * gamma.squaredNorm();
  if (row.variance > 0.0) {
    const double sd = std::sqrt(row.variance);
    row.omega = scaled / sd;
    row.tau = (kappa - gamma.dot(eta)) / sd;
  }
  return row;
}

HalfSpaceProblem whiten(const GeneralGaussianSpec& spec, double drop_tau) {
  const auto d = spec.eta.size();
  if (spec.sigma.rows() != d || spec.gamma.cols() != d || spec.gamma.rows() != spec.kappa.size()) {
    throw Error(ErrorCode::kInvalidInput, "inconsistent dimensions in general Gaussian problem");
  }
  const CovarianceRoot root = covariance_root(spec.sigma);
  Eigen::MatrixXd omega(spec.gamma.rows(), d);
  Eigen::VectorXd tau(spec.gamma.rows());
  for (Eigen::Index j = 0; j < spec.gamma.rows(); ++j) {
    const WhitenedRow row = whiten_row(root, spec.eta, spec.gamma.row(j).transpose(), spec.kappa(j));
    if (!(row.variance > 0.0)) {
      throw Error(ErrorCode::kDegenerateConstraint,
                  "constraint " + std::to_string(j) + " has zero variance under Sigma");
    }
    if (row.degenerate) {
      throw Error(ErrorCode::kNearSingularCovariance,
                  "constraint " + std::to_string(j) + " lies in a near-null direction of Sigma");
    }
    omega.row(j) = row.omega.transpose();
    tau(j) = row.tau;
  }
  return HalfSpaceProblem(omega, tau, drop_tau);
}

}  // namespace aloe
