#pragma once

#include <Eigen/Core>

#include "funcint/assembly.hpp"

namespace funcint {

/// Boltzmann ensemble p(d) ~ exp(-beta E(d)) over the open dofs of `form`.
struct EnsembleSpec {
  double beta = 1.0;
  QuadraticForm form;
};

/// Exact statistics of a Gaussian ensemble.
///
/// `covariance` is empty when it was not requested. `log_Z` is always kept in
/// log scale; Z itself underflows for the beta * E ranges used in practice.
struct GaussianStats {
  double beta = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double log_Z = 0.0;
  double min_energy = 0.0;
  double mean_energy = 0.0;
  double log_det_K = 0.0;

  std::size_t n() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// mean = -K^{-1} b, covariance = (beta K)^{-1},
/// log Z = n/2 ln(2 pi / beta) - 1/2 ln det K - beta min_energy,
/// from a single Cholesky factorization of K.
GaussianStats moments(const EnsembleSpec& spec, bool with_covariance = true);

/// a^T mean + a0.
double expect_linear(const GaussianStats& stats, const Eigen::VectorXd& a, double a0 = 0.0);

/// <d^T A d + a^T d + a0> = mean^T A mean + tr(A C) + a^T mean + a0.
double expect_quadratic(const GaussianStats& stats, const Eigen::MatrixXd& A,
                        const Eigen::VectorXd& a, double a0 = 0.0);

}  // namespace funcint
