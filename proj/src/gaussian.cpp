#include "funcint/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "funcint/error.hpp"
#include "funcint/linalg.hpp"

namespace funcint {

GaussianStats moments(const EnsembleSpec& spec, bool with_covariance) {
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) {
    throw Error(ErrorCode::InvalidParameter, "beta must be positive");
  }
  const QuadraticForm& q = spec.form;
  if (q.K.rows() != q.b.size() || q.K.cols() != q.b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "K and b sizes differ");
  }
  const SpdFactor chol(q.K);
  const double n = static_cast<double>(q.n());

  GaussianStats s;
  s.beta = spec.beta;
  s.mean = q.n() ? Eigen::VectorXd(-chol.solve(q.b)) : Eigen::VectorXd();
  s.min_energy = q.c + 0.5 * q.b.dot(s.mean);
  s.mean_energy = s.min_energy + 0.5 * n / spec.beta;
  s.log_det_K = chol.log_det();
  s.log_Z = 0.5 * n * std::log(2.0 * std::numbers::pi / spec.beta) - 0.5 * s.log_det_K -
            spec.beta * s.min_energy;
  if (with_covariance) s.covariance = chol.inverse() / spec.beta;
  return s;
}

double expect_linear(const GaussianStats& stats, const Eigen::VectorXd& a, double a0) {
  if (a.size() != stats.mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector has wrong length");
  }
  return a.dot(stats.mean) + a0;
}

double expect_quadratic(const GaussianStats& stats, const Eigen::MatrixXd& A,
                        const Eigen::VectorXd& a, double a0) {
  const auto n = stats.mean.size();
  if (A.rows() != n || A.cols() != n || a.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient sizes do not match the ensemble");
  }
  if (!is_symmetric(A)) throw Error(ErrorCode::NonSymmetric, "quadratic coefficient not symmetric");
  if (n > 0 && stats.covariance.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "covariance was not computed");
  }
  const double trace = n ? (A.cwiseProduct(stats.covariance)).sum() : 0.0;
  return stats.mean.dot(A * stats.mean) + trace + a.dot(stats.mean) + a0;
}

}  // namespace funcint
