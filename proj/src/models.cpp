#include "funcint/models.hpp"

#include <cmath>
#include <map>
#include <string>

#include "funcint/error.hpp"

namespace funcint {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive");
  }
}

void require_interval(const Mesh& mesh, double length) {
  if (mesh.spatial_dim() != 1) {
    throw Error(ErrorCode::InvalidParameter, "a 1-D interval mesh is required");
  }
  double lo = mesh.nodes().front().coords.x(), hi = lo;
  for (const auto& n : mesh.nodes()) {
    lo = std::min(lo, n.coords.x());
    hi = std::max(hi, n.coords.x());
  }
  const double tol = 1e-12 * length;
  if (std::abs(lo) > tol || std::abs(hi - length) > tol) {
    throw Error(ErrorCode::InvalidParameter, "mesh must span [0, " + std::to_string(length) + "]");
  }
}

}  // namespace

std::vector<double> Load::nodal_values(const Mesh& mesh) const {
  std::vector<double> f(mesh.node_count());
  if (const auto* c = std::get_if<double>(&source)) {
    if (*c == 0.0) return {};
    std::fill(f.begin(), f.end(), *c);
  } else if (const auto* v = std::get_if<std::vector<double>>(&source)) {
    if (v->size() != mesh.node_count()) {
      throw Error(ErrorCode::DimensionMismatch, "nodal load has " + std::to_string(v->size()) +
                                                    " values for " +
                                                    std::to_string(mesh.node_count()) + " nodes");
    }
    f = *v;
  } else {
    const auto& fn = std::get<std::function<double(const Point&)>>(source);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(mesh.nodes()[i].coords);
  }
  return f;
}

ModelSystem build_string(const StringParams& p, const Mesh& mesh) {
  require_positive(p.length, "length");
  require_positive(p.sigma, "sigma");
  require_interval(mesh, p.length);
  for (const auto& e : mesh.elements()) {
    if (e.kind != ElementKind::Line2) {
      throw Error(ErrorCode::InvalidParameter, "the string model uses Line2 elements");
    }
  }
  const std::vector<Constraint> bc = {{NodeSelector::at(0.0), 0, p.left},
                                      {NodeSelector::at(p.length), 0, p.right}};
  DofMap dofs(mesh, 1, bc);
  Coefficient material{p.sigma, {}};
  auto f = p.load.nodal_values(mesh);
  QuadraticForm form = assemble(mesh, dofs, material, f);
  return {"string", mesh, std::move(dofs), material, std::move(f), std::move(form)};
}

ModelSystem build_beam(const BeamParams& p, const Mesh& mesh) {
  require_positive(p.length, "length");
  require_positive(p.bending_stiffness, "bending_stiffness");
  require_interval(mesh, p.length);
  Mesh hermite = mesh.with_element_kind(ElementKind::HermiteLine2);

  std::vector<Constraint> bc;
  for (const auto& s : p.supports) {
    if (s.value) bc.push_back({NodeSelector::at(s.x), 0, *s.value});
    if (s.slope) bc.push_back({NodeSelector::at(s.x), 1, *s.slope});
  }
  DofMap dofs(hermite, 2, bc);
  Coefficient material{p.bending_stiffness, {}};
  auto f = p.load.nodal_values(hermite);
  QuadraticForm form = assemble(hermite, dofs, material, f);
  return {"beam", std::move(hermite), std::move(dofs), material, std::move(f), std::move(form)};
}

ModelSystem build_membrane(const MembraneParams& p) {
  require_positive(p.sigma, "sigma");
  if (p.mesh.spatial_dim() != 2) {
    throw Error(ErrorCode::InvalidParameter, "the membrane model needs a 2-D mesh");
  }
  std::map<double, std::vector<int>> tags_by_value;
  for (const auto& [tag, value] : p.boundary_values) tags_by_value[value].push_back(tag);
  std::vector<Constraint> bc;
  for (auto& [value, tags] : tags_by_value) {
    bc.push_back({NodeSelector::physical(tags), 0, value});
  }
  DofMap dofs(p.mesh, 1, bc);
  Coefficient material{p.sigma, {}};
  auto f = p.load.nodal_values(p.mesh);
  QuadraticForm form = assemble(p.mesh, dofs, material, f);
  return {"membrane2d", p.mesh, std::move(dofs), material, std::move(f), std::move(form)};
}

}  // namespace funcint
