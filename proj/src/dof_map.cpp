#include "funcint/dof_map.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "funcint/error.hpp"

namespace funcint {

NodeSelector NodeSelector::id(int node_id) {
  NodeSelector s;
  s.kind_ = Kind::Id;
  s.node_id_ = node_id;
  return s;
}

NodeSelector NodeSelector::at(Point p, double tol) {
  NodeSelector s;
  s.kind_ = Kind::At;
  s.point_ = p;
  s.tol_ = tol;
  return s;
}

NodeSelector NodeSelector::physical(std::vector<int> tags) {
  NodeSelector s;
  s.kind_ = Kind::Physical;
  s.tags_ = std::move(tags);
  return s;
}

std::vector<int> NodeSelector::resolve(const Mesh& mesh) const {
  switch (kind_) {
    case Kind::Id:
      if (!mesh.has_node(node_id_)) {
        throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node_id_) + " does not exist");
      }
      return {node_id_};
    case Kind::At: {
      const double tol = tol_ * std::max(1.0, mesh.h());
      for (const auto& n : mesh.nodes()) {
        if ((n.coords - point_).norm() <= tol) return {n.id};
      }
      throw Error(ErrorCode::UnknownNode, "no node at (" + std::to_string(point_.x()) + ", " +
                                              std::to_string(point_.y()) + ")");
    }
    case Kind::Physical: {
      std::vector<char> hit(mesh.node_count(), 0);
      auto scan = [&](const std::vector<Element>& elements) {
        for (const auto& e : elements) {
          if (std::find(tags_.begin(), tags_.end(), e.physical_tag) == tags_.end()) continue;
          for (int id : e.node_ids) hit[mesh.node_index(id)] = 1;
        }
      };
      scan(mesh.boundary());
      scan(mesh.elements());
      std::vector<int> ids;
      for (std::size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) ids.push_back(mesh.nodes()[i].id);
      }
      if (ids.empty()) {
        throw Error(ErrorCode::UnknownNode, "no nodes carry the requested physical tag");
      }
      return ids;
    }
  }
  return {};
}

DofMap::DofMap(const Mesh& mesh, int ndof_per_node, std::span<const Constraint> constraints)
    : ndof_per_node_(ndof_per_node) {
  if (ndof_per_node != 1 && ndof_per_node != 2) {
    throw Error(ErrorCode::InvalidParameter, "ndof_per_node must be 1 or 2");
  }
  const std::size_t n_nodes = mesh.node_count();
  std::vector<std::optional<double>> prescribed(n_nodes * ndof_per_node);

  for (const auto& c : constraints) {
    if (c.local_dof < 0 || c.local_dof >= ndof_per_node) {
      throw Error(ErrorCode::InvalidParameter,
                  "local dof " + std::to_string(c.local_dof) + " out of range");
    }
    for (int id : c.nodes.resolve(mesh)) {
      auto& slot = prescribed[mesh.node_index(id) * ndof_per_node + c.local_dof];
      if (slot) {
        throw Error(ErrorCode::DuplicateConstraint, "node " + std::to_string(id) + " dof " +
                                                        std::to_string(c.local_dof) +
                                                        " is constrained twice");
      }
      slot = c.value;
    }
  }

  // Open dofs are numbered in (node id, local dof) order.
  std::vector<std::size_t> by_id(n_nodes);
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return mesh.nodes()[a].id < mesh.nodes()[b].id;
  });

  status_.assign(n_nodes * ndof_per_node, ClosedDof{0.0});
  for (std::size_t i : by_id) {
    for (int k = 0; k < ndof_per_node; ++k) {
      const std::size_t slot = i * ndof_per_node + k;
      if (prescribed[slot]) {
        status_[slot] = ClosedDof{*prescribed[slot]};
      } else {
        status_[slot] = OpenDof{static_cast<int>(labels_.size())};
        labels_.push_back({mesh.nodes()[i].id, k});
      }
    }
  }
}

std::optional<int> DofMap::open_index(std::size_t node_index, int local_dof) const {
  if (const auto* o = std::get_if<OpenDof>(&status(node_index, local_dof))) return o->index;
  return std::nullopt;
}

DofMap build_dof_map(const Mesh& mesh, int ndof_per_node,
                     std::span<const Constraint> constraints) {
  return DofMap(mesh, ndof_per_node, constraints);
}

}  // namespace funcint
