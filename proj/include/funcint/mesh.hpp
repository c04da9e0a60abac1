#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace funcint {

/// Spatial point. One-dimensional meshes use x only and keep y = 0.
using Point = Eigen::Vector2d;

enum class ElementKind {
  Line2,         ///< two-node line, linear interpolation, 1 dof/node
  HermiteLine2,  ///< two-node line, cubic Hermite interpolation, 2 dofs/node
  Tri3,          ///< three-node triangle, linear interpolation, 1 dof/node
};

std::string_view to_string(ElementKind kind);
std::size_t nodes_per_element(ElementKind kind);
bool is_line(ElementKind kind);

struct Node {
  int id = 0;
  Point coords = Point::Zero();
};

struct Element {
  int id = 0;
  ElementKind kind = ElementKind::Line2;
  std::vector<int> node_ids;
  int physical_tag = 0;
};

/// Immutable discretized domain.
///
/// `elements()` are the cells that carry energy (lines in 1-D, triangles in
/// 2-D). `boundary()` holds lower-dimensional elements read from a mesh file
/// (lines of a 2-D mesh); they carry physical tags for constraint selection
/// and never contribute to assembly.
class Mesh {
 public:
  Mesh(int spatial_dim, std::vector<Node> nodes, std::vector<Element> elements,
       std::vector<Element> boundary = {});

  int spatial_dim() const noexcept { return spatial_dim_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  const std::vector<Element>& boundary() const noexcept { return boundary_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool has_node(int id) const { return index_.contains(id); }
  /// Position of node `id` in `nodes()`; throws UnknownNode.
  std::size_t node_index(int id) const;
  const Point& coords(int id) const { return nodes_[node_index(id)].coords; }

  /// Largest element diameter.
  double h() const noexcept { return h_; }
  double element_diameter(const Element& e) const;

  /// Same geometry, every domain element reinterpreted as `kind`. Only
  /// Line2 <-> HermiteLine2 is meaningful.
  Mesh with_element_kind(ElementKind kind) const;

 private:
  void validate();

  int spatial_dim_;
  std::vector<Node> nodes_;
  std::vector<Element> elements_;
  std::vector<Element> boundary_;
  std::unordered_map<int, std::size_t> index_;
  double h_ = 0.0;
};

/// Interval [0, length] with nodes at `positions` (ids 1..n in order).
Mesh build_interval_mesh(double length, std::span<const double> positions,
                         ElementKind kind = ElementKind::Line2);
Mesh build_uniform_interval_mesh(double length, std::size_t n_elements,
                                 ElementKind kind = ElementKind::Line2);

/// Structured right-triangle mesh of [0,lx] x [0,ly]; every boundary edge is a
/// Line2 boundary element with physical tag `boundary_tag`.
Mesh build_rectangle_mesh(std::size_t nx, std::size_t ny, double lx = 1.0, double ly = 1.0,
                          int boundary_tag = 1);

double signed_area(const Point& a, const Point& b, const Point& c);

/// Gmsh MSH 2.2 ASCII reader. Throws ParseError.
Mesh parse_msh(std::string_view text);
Mesh read_msh_file(const std::string& path);
/// MSH 2.2 ASCII text for `mesh` (cells, then boundary elements).
std::string to_msh(const Mesh& mesh);

}  // namespace funcint
