#include "funcint/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "funcint/assembly.hpp"
#include "funcint/elements.hpp"
#include "funcint/error.hpp"

namespace funcint {
namespace {

constexpr double kInsideTol = 1e-12;

std::string describe(const Point& x, int dim) {
  std::string s = "(" + std::to_string(x.x());
  if (dim == 2) s += ", " + std::to_string(x.y());
  return s + ")";
}

}  // namespace

Eigen::VectorXd FieldProbe::dense(std::size_t n_open) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_open));
  for (const auto& [i, v] : open) w[i] += v;
  return w;
}

FieldProbe probe_field(const Mesh& mesh, const DofMap& dofs, const Point& x) {
  const int nd = dofs.ndof_per_node();
  for (const Element& e : mesh.elements()) {
    Eigen::VectorXd phi;
    if (is_line(e.kind)) {
      const double x0 = mesh.coords(e.node_ids[0]).x();
      const double x1 = mesh.coords(e.node_ids[1]).x();
      const double h = x1 - x0;
      if (x.x() < x0 - kInsideTol * h || x.x() > x1 + kInsideTol * h) continue;
      const double s = std::clamp((x.x() - x0) / h, 0.0, 1.0);
      phi = e.kind == ElementKind::Line2 ? Eigen::VectorXd(line2_values(s))
                                         : Eigen::VectorXd(hermite_values(s, h));
    } else {
      const Point& a = mesh.coords(e.node_ids[0]);
      const Point& b = mesh.coords(e.node_ids[1]);
      const Point& c = mesh.coords(e.node_ids[2]);
      const double area = signed_area(a, b, c);
      const double l1 = signed_area(x, b, c) / area;
      const double l2 = signed_area(a, x, c) / area;
      const double l3 = 1.0 - l1 - l2;
      if (l1 < -kInsideTol || l2 < -kInsideTol || l3 < -kInsideTol) continue;
      phi = Eigen::Vector3d(l1, l2, l3);
    }

    FieldProbe p;
    const auto slots = element_dof_slots(mesh, e, nd);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto& st = dofs.status(slots[k] / nd, static_cast<int>(slots[k] % nd));
      if (const auto* o = std::get_if<OpenDof>(&st)) {
        p.open.emplace_back(o->index, phi[static_cast<Eigen::Index>(k)]);
      } else {
        p.offset += phi[static_cast<Eigen::Index>(k)] * std::get<ClosedDof>(st).value;
      }
    }
    return p;
  }
  throw Error(ErrorCode::PointOutsideDomain,
              "point " + describe(x, mesh.spatial_dim()) + " is outside the mesh");
}

double evaluate_field(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& d,
                      const Point& x) {
  const FieldProbe p = probe_field(mesh, dofs, x);
  double u = p.offset;
  for (const auto& [i, w] : p.open) u += w * d[i];
  return u;
}

double mean_field(const GaussianStats& stats, const Mesh& mesh, const DofMap& dofs,
                  const Point& x) {
  return evaluate_field(mesh, dofs, stats.mean, x);
}

double field_covariance(const GaussianStats& stats, const Mesh& mesh, const DofMap& dofs,
                        const Point& x, const Point& y) {
  if (stats.covariance.rows() != stats.mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "covariance was not computed");
  }
  const FieldProbe px = probe_field(mesh, dofs, x);
  const FieldProbe py = probe_field(mesh, dofs, y);
  double v = 0.0;
  for (const auto& [i, wi] : px.open) {
    for (const auto& [j, wj] : py.open) v += wi * stats.covariance(i, j) * wj;
  }
  return v;
}

}  // namespace funcint
