#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "funcint/mesh.hpp"

namespace funcint {

struct OpenDof {
  int index;
};
struct ClosedDof {
  double value;
};
using DofStatus = std::variant<OpenDof, ClosedDof>;

/// Identifies one degree of freedom: node id plus 0-based local dof
/// (0 = value, 1 = slope for Hermite nodes).
struct DofLabel {
  int node_id;
  int local_dof;

  friend bool operator==(const DofLabel&, const DofLabel&) = default;
};

/// Resolves to a set of mesh nodes.
class NodeSelector {
 public:
  static NodeSelector id(int node_id);
  /// The node located at `p` (within `tol`, scaled by the mesh size).
  static NodeSelector at(Point p, double tol = 1e-9);
  static NodeSelector at(double x, double tol = 1e-9) { return at(Point(x, 0.0), tol); }
  /// Every node of a boundary (or domain) element carrying one of `tags`.
  static NodeSelector physical(std::vector<int> tags);

  /// Node ids in mesh order, without duplicates. Throws UnknownNode when
  /// nothing matches.
  std::vector<int> resolve(const Mesh& mesh) const;

 private:
  enum class Kind { Id, At, Physical };
  Kind kind_ = Kind::Id;
  int node_id_ = 0;
  Point point_ = Point::Zero();
  double tol_ = 0.0;
  std::vector<int> tags_;
};

struct Constraint {
  NodeSelector nodes;
  int local_dof = 0;
  double value = 0.0;
};

/// Open/closed status of every (node, local dof) pair.
class DofMap {
 public:
  DofMap(const Mesh& mesh, int ndof_per_node, std::span<const Constraint> constraints);

  int ndof_per_node() const noexcept { return ndof_per_node_; }
  std::size_t n_open() const noexcept { return labels_.size(); }
  std::size_t n_closed() const noexcept { return status_.size() - labels_.size(); }
  std::size_t node_count() const noexcept { return status_.size() / ndof_per_node_; }

  /// Status by node position in `mesh.nodes()`.
  const DofStatus& status(std::size_t node_index, int local_dof) const {
    return status_[node_index * ndof_per_node_ + local_dof];
  }
  std::optional<int> open_index(std::size_t node_index, int local_dof) const;
  bool is_closed(std::size_t node_index, int local_dof) const {
    return std::holds_alternative<ClosedDof>(status(node_index, local_dof));
  }

  /// Open index -> (node id, local dof).
  const std::vector<DofLabel>& labels() const noexcept { return labels_; }

 private:
  int ndof_per_node_;
  std::vector<DofStatus> status_;
  std::vector<DofLabel> labels_;
};

DofMap build_dof_map(const Mesh& mesh, int ndof_per_node,
                     std::span<const Constraint> constraints);

}  // namespace funcint
