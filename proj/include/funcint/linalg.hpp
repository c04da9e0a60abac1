#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace funcint {

/// Cholesky factorization of a symmetric positive-definite matrix: the single
/// kernel behind solves, log-determinants and covariances. Dense storage, so
/// cost is O(n^3) in time and O(n^2) in memory.
class SpdFactor {
 public:
  /// Throws NotPositiveDefinite when a pivot is non-positive or negligible
  /// relative to the largest diagonal entry (ratio below `rel_tol`).
  explicit SpdFactor(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

  Eigen::Index size() const { return llt_.rows(); }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }
  double log_det() const;
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

bool is_symmetric(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

}  // namespace funcint
