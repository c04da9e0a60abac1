#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "funcint/dof_map.hpp"
#include "funcint/gaussian.hpp"
#include "funcint/mesh.hpp"

namespace funcint {

/// u^h(x) as an affine function of the open dofs: sum_k w_k d_{i_k} + offset.
struct FieldProbe {
  std::vector<std::pair<int, double>> open;  ///< (open index, shape value)
  double offset = 0.0;                       ///< prescribed-value contribution

  Eigen::VectorXd dense(std::size_t n_open) const;
};

/// Throws PointOutsideDomain when no element contains `x`.
FieldProbe probe_field(const Mesh& mesh, const DofMap& dofs, const Point& x);

double evaluate_field(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& d,
                      const Point& x);

/// <u^h(x)>.
double mean_field(const GaussianStats& stats, const Mesh& mesh, const DofMap& dofs,
                  const Point& x);

/// Cov(u^h(x), u^h(y)); needs `stats.covariance`.
double field_covariance(const GaussianStats& stats, const Mesh& mesh, const DofMap& dofs,
                        const Point& x, const Point& y);

}  // namespace funcint
