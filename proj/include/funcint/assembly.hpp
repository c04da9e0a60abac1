#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "funcint/dof_map.hpp"
#include "funcint/mesh.hpp"

namespace funcint {

/// E(d) = 1/2 d^T K d + b^T d + c over the open dofs.
///
/// b = v - F, where v couples open dofs to prescribed values and F is the
/// consistent load on open dofs. c collects every d-independent term
/// (prescribed-value energy and load work on prescribed dofs) so that E(d)
/// equals the discretized energy exactly.
struct QuadraticForm {
  Eigen::MatrixXd K;
  Eigen::VectorXd b;
  double c = 0.0;
  std::vector<DofLabel> labels;

  std::size_t n() const noexcept { return static_cast<std::size_t>(b.size()); }
};

/// Per-element material coefficient: tension for Line2/Tri3, bending stiffness
/// for HermiteLine2.
struct Coefficient {
  double uniform = 1.0;
  std::vector<double> per_element;  ///< overrides `uniform` when non-empty

  double at(std::size_t element) const {
    return per_element.empty() ? uniform : per_element[element];
  }
};

/// Throws SingularAfterBC when K is not positive definite (for example a string
/// with no prescribed value). `nodal_load` holds one f value per mesh node in
/// `mesh.nodes()` order; empty means unloaded.
QuadraticForm assemble(const Mesh& mesh, const DofMap& dofs, const Coefficient& material,
                       std::span<const double> nodal_load = {});

struct FormSensitivity {
  Eigen::VectorXd db;
  double dc = 0.0;
};

/// Exact derivatives of (b, c) with respect to the prescribed value of `wrt`.
/// Throws NotAClosedDof.
FormSensitivity assemble_sensitivity(const Mesh& mesh, const DofMap& dofs,
                                     const Coefficient& material,
                                     std::span<const double> nodal_load, DofLabel wrt);

double energy(const QuadraticForm& q, const Eigen::VectorXd& d);

/// Every dof value (open from `d`, closed from the map), indexed
/// node_index * ndof_per_node + local_dof.
Eigen::VectorXd full_dof_vector(const DofMap& dofs, const Eigen::VectorXd& d);

/// Global slots (node_index * ndof + local) of an element's dofs, in element order.
std::vector<std::size_t> element_dof_slots(const Mesh& mesh, const Element& e, int ndof_per_node);

}  // namespace funcint
