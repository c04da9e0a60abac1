#include "funcint/linalg.hpp"

#include <cmath>

#include "funcint/error.hpp"

namespace funcint {

SpdFactor::SpdFactor(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  if (a.size() == 0) return;
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  }
  const double max_diag = a.diagonal().cwiseAbs().maxCoeff();
  const auto l_diag = llt_.matrixLLT().diagonal();
  const double min_pivot = l_diag.cwiseAbs2().minCoeff();
  if (!(min_pivot > rel_tol * max_diag) || !std::isfinite(min_pivot)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "matrix is numerically singular (pivot ratio " +
                    std::to_string(min_pivot / max_diag) + ")");
  }
}

double SpdFactor::log_det() const {
  if (llt_.rows() == 0) return 0.0;
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd SpdFactor::inverse() const {
  if (llt_.rows() == 0) return {};
  return llt_.solve(Eigen::MatrixXd::Identity(llt_.rows(), llt_.cols()));
}

bool is_symmetric(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

}  // namespace funcint
