#include "funcint/assembly.hpp"

#include <algorithm>
#include <string>

#include "funcint/elements.hpp"
#include "funcint/error.hpp"
#include "funcint/linalg.hpp"

namespace funcint {
namespace {

int required_ndof(ElementKind kind) { return kind == ElementKind::HermiteLine2 ? 2 : 1; }

std::vector<Point> element_coords(const Mesh& mesh, const Element& e) {
  std::vector<Point> pts;
  pts.reserve(e.node_ids.size());
  for (int id : e.node_ids) pts.push_back(mesh.coords(id));
  return pts;
}

std::vector<double> element_load(const Mesh& mesh, const Element& e,
                                 std::span<const double> nodal_load) {
  if (nodal_load.empty()) return {};
  std::vector<double> f;
  f.reserve(e.node_ids.size());
  for (int id : e.node_ids) f.push_back(nodal_load[mesh.node_index(id)]);
  return f;
}

void check_inputs(const Mesh& mesh, const DofMap& dofs, const Coefficient& material,
                  std::span<const double> nodal_load) {
  if (dofs.node_count() != mesh.node_count()) {
    throw Error(ErrorCode::DimensionMismatch, "dof map does not match mesh");
  }
  if (!nodal_load.empty() && nodal_load.size() != mesh.node_count()) {
    throw Error(ErrorCode::DimensionMismatch, "nodal load needs one value per node");
  }
  if (!material.per_element.empty() && material.per_element.size() != mesh.elements().size()) {
    throw Error(ErrorCode::DimensionMismatch, "material needs one coefficient per element");
  }
  for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
    if (required_ndof(mesh.elements()[e].kind) != dofs.ndof_per_node()) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(to_string(mesh.elements()[e].kind)) + " needs " +
                      std::to_string(required_ndof(mesh.elements()[e].kind)) + " dofs per node");
    }
    if (!(material.at(e) > 0.0)) {
      throw Error(ErrorCode::InvalidParameter,
                  "material coefficient of element " + std::to_string(e) + " must be positive");
    }
  }
}

double closed_value(const DofMap& dofs, std::size_t slot) {
  const int nd = dofs.ndof_per_node();
  return std::get<ClosedDof>(dofs.status(slot / nd, static_cast<int>(slot % nd))).value;
}

std::optional<int> open_slot(const DofMap& dofs, std::size_t slot) {
  const int nd = dofs.ndof_per_node();
  return dofs.open_index(slot / nd, static_cast<int>(slot % nd));
}

}  // namespace

std::vector<std::size_t> element_dof_slots(const Mesh& mesh, const Element& e, int ndof_per_node) {
  std::vector<std::size_t> slots;
  slots.reserve(e.node_ids.size() * ndof_per_node);
  for (int id : e.node_ids) {
    const std::size_t base = mesh.node_index(id) * ndof_per_node;
    for (int k = 0; k < ndof_per_node; ++k) slots.push_back(base + k);
  }
  return slots;
}

QuadraticForm assemble(const Mesh& mesh, const DofMap& dofs, const Coefficient& material,
                       std::span<const double> nodal_load) {
  check_inputs(mesh, dofs, material, nodal_load);
  const auto n = static_cast<Eigen::Index>(dofs.n_open());

  QuadraticForm q;
  q.K = Eigen::MatrixXd::Zero(n, n);
  q.b = Eigen::VectorXd::Zero(n);
  q.c = 0.0;
  q.labels = dofs.labels();

  const int nd = dofs.ndof_per_node();
  for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
    const Element& el = mesh.elements()[e];
    const auto coords = element_coords(mesh, el);
    const auto f = element_load(mesh, el, nodal_load);
    const ElementMatrices em = element_matrices(el.kind, coords, material.at(e), f);
    const auto slots = element_dof_slots(mesh, el, nd);

    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto oi = open_slot(dofs, slots[i]);
      if (oi) {
        q.b[*oi] -= em.f_vec[i];
      } else {
        q.c -= em.f_vec[i] * closed_value(dofs, slots[i]);
      }
      for (std::size_t j = 0; j < slots.size(); ++j) {
        const double kij = em.k(i, j);
        const auto oj = open_slot(dofs, slots[j]);
        if (oi && oj) {
          q.K(*oi, *oj) += kij;
        } else if (oi) {
          q.b[*oi] += kij * closed_value(dofs, slots[j]);
        } else if (!oj) {
          q.c += 0.5 * kij * closed_value(dofs, slots[i]) * closed_value(dofs, slots[j]);
        }
      }
    }
  }

  try {
    SpdFactor check(q.K);
  } catch (const Error&) {
    throw Error(ErrorCode::SingularAfterBC,
                "stiffness is singular after applying prescribed values (" + std::to_string(n) +
                    " open dofs); the system is under-constrained");
  }
  return q;
}

FormSensitivity assemble_sensitivity(const Mesh& mesh, const DofMap& dofs,
                                     const Coefficient& material,
                                     std::span<const double> nodal_load, DofLabel wrt) {
  check_inputs(mesh, dofs, material, nodal_load);
  const int nd = dofs.ndof_per_node();
  if (wrt.local_dof < 0 || wrt.local_dof >= nd) {
    throw Error(ErrorCode::NotAClosedDof, "local dof out of range");
  }
  const std::size_t target = mesh.node_index(wrt.node_id) * nd + wrt.local_dof;
  if (open_slot(dofs, target)) {
    throw Error(ErrorCode::NotAClosedDof, "node " + std::to_string(wrt.node_id) + " dof " +
                                              std::to_string(wrt.local_dof) + " is open");
  }

  FormSensitivity s;
  s.db = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dofs.n_open()));
  for (std::size_t e = 0; e < mesh.elements().size(); ++e) {
    const Element& el = mesh.elements()[e];
    const auto slots = element_dof_slots(mesh, el, nd);
    const auto it = std::find(slots.begin(), slots.end(), target);
    if (it == slots.end()) continue;
    const auto t = static_cast<std::size_t>(it - slots.begin());

    const ElementMatrices em = element_matrices(el.kind, element_coords(mesh, el), material.at(e),
                                                element_load(mesh, el, nodal_load));
    s.dc -= em.f_vec[t];
    for (std::size_t j = 0; j < slots.size(); ++j) {
      if (const auto oj = open_slot(dofs, slots[j])) {
        s.db[*oj] += em.k(j, t);
      } else {
        s.dc += em.k(t, j) * closed_value(dofs, slots[j]);
      }
    }
  }
  return s;
}

double energy(const QuadraticForm& q, const Eigen::VectorXd& d) {
  if (static_cast<std::size_t>(d.size()) != q.n()) {
    throw Error(ErrorCode::DimensionMismatch, "state has " + std::to_string(d.size()) +
                                                  " entries, form has " + std::to_string(q.n()));
  }
  return 0.5 * d.dot(q.K * d) + q.b.dot(d) + q.c;
}

Eigen::VectorXd full_dof_vector(const DofMap& dofs, const Eigen::VectorXd& d) {
  if (static_cast<std::size_t>(d.size()) != dofs.n_open()) {
    throw Error(ErrorCode::DimensionMismatch, "state size does not match open dof count");
  }
  const int nd = dofs.ndof_per_node();
  Eigen::VectorXd u(static_cast<Eigen::Index>(dofs.node_count() * nd));
  for (std::size_t i = 0; i < dofs.node_count(); ++i) {
    for (int k = 0; k < nd; ++k) {
      const auto& st = dofs.status(i, k);
      u[static_cast<Eigen::Index>(i * nd + k)] =
          std::holds_alternative<OpenDof>(st) ? d[std::get<OpenDof>(st).index]
                                              : std::get<ClosedDof>(st).value;
    }
  }
  return u;
}

}  // namespace funcint
