#include "funcint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "funcint/error.hpp"

namespace funcint {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Line2: return "Line2";
    case ElementKind::HermiteLine2: return "HermiteLine2";
    case ElementKind::Tri3: return "Tri3";
  }
  return "?";
}

std::size_t nodes_per_element(ElementKind kind) {
  return kind == ElementKind::Tri3 ? 3 : 2;
}

bool is_line(ElementKind kind) {
  return kind == ElementKind::Line2 || kind == ElementKind::HermiteLine2;
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Mesh::Mesh(int spatial_dim, std::vector<Node> nodes, std::vector<Element> elements,
           std::vector<Element> boundary)
    : spatial_dim_(spatial_dim),
      nodes_(std::move(nodes)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)) {
  validate();
}

std::size_t Mesh::node_index(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id) + " does not exist");
  }
  return it->second;
}

double Mesh::element_diameter(const Element& e) const {
  double d = 0.0;
  for (std::size_t i = 0; i < e.node_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < e.node_ids.size(); ++j) {
      d = std::max(d, (coords(e.node_ids[i]) - coords(e.node_ids[j])).norm());
    }
  }
  return d;
}

Mesh Mesh::with_element_kind(ElementKind kind) const {
  std::vector<Element> elements = elements_;
  for (auto& e : elements) {
    if (nodes_per_element(e.kind) != nodes_per_element(kind)) {
      throw Error(ErrorCode::InvalidParameter,
                  "cannot reinterpret " + std::string(to_string(e.kind)) + " as " +
                      std::string(to_string(kind)));
    }
    e.kind = kind;
  }
  return Mesh(spatial_dim_, nodes_, std::move(elements), boundary_);
}

void Mesh::validate() {
  if (spatial_dim_ != 1 && spatial_dim_ != 2) {
    throw Error(ErrorCode::InvalidParameter, "spatial dimension must be 1 or 2");
  }
  if (elements_.empty()) {
    throw Error(ErrorCode::TooFewNodes, "mesh has no elements");
  }
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw Error(ErrorCode::InvalidParameter,
                  "duplicate node id " + std::to_string(nodes_[i].id));
    }
    if (spatial_dim_ == 1 && nodes_[i].coords.y() != 0.0) {
      throw Error(ErrorCode::InvalidParameter, "1-D mesh node " +
                                                   std::to_string(nodes_[i].id) +
                                                   " has non-zero y coordinate");
    }
  }

  auto check_refs = [&](const Element& e) {
    if (e.node_ids.size() != nodes_per_element(e.kind)) {
      throw Error(ErrorCode::InvalidParameter,
                  "element " + std::to_string(e.id) + " has wrong node count");
    }
    for (int id : e.node_ids) {
      if (!index_.contains(id)) {
        throw Error(ErrorCode::DanglingNodeReference, "element " + std::to_string(e.id) +
                                                          " references missing node " +
                                                          std::to_string(id));
      }
    }
  };

  std::vector<char> referenced(nodes_.size(), 0);
  for (const auto& e : elements_) {
    check_refs(e);
    if (spatial_dim_ == 1 && !is_line(e.kind)) {
      throw Error(ErrorCode::InvalidParameter, "1-D mesh may only contain line elements");
    }
    if (spatial_dim_ == 2 && e.kind != ElementKind::Tri3) {
      throw Error(ErrorCode::InvalidParameter, "2-D mesh cells must be triangles");
    }
    for (int id : e.node_ids) referenced[index_.at(id)] = 1;

    if (is_line(e.kind)) {
      if (!(coords(e.node_ids[0]).x() < coords(e.node_ids[1]).x())) {
        throw Error(ErrorCode::NonMonotonePositions,
                    "line element " + std::to_string(e.id) + " is not increasing in x");
      }
    } else {
      const double area =
          signed_area(coords(e.node_ids[0]), coords(e.node_ids[1]), coords(e.node_ids[2]));
      const double scale = element_diameter(e);
      if (!(area > 1e-14 * scale * scale)) {
        throw Error(ErrorCode::DegenerateTriangle,
                    "triangle " + std::to_string(e.id) + " has non-positive area");
      }
    }
    h_ = std::max(h_, element_diameter(e));
  }
  for (const auto& e : boundary_) check_refs(e);

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!referenced[i]) {
      throw Error(ErrorCode::OrphanNode, "node " + std::to_string(nodes_[i].id) +
                                             " is not used by any element");
    }
  }

  if (spatial_dim_ == 1) {
    // Sorted intervals must not overlap.
    std::vector<std::pair<double, double>> spans;
    spans.reserve(elements_.size());
    for (const auto& e : elements_) {
      spans.emplace_back(coords(e.node_ids[0]).x(), coords(e.node_ids[1]).x());
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first < spans[i - 1].second) {
        throw Error(ErrorCode::NonMonotonePositions, "1-D elements overlap");
      }
    }
  }
}

Mesh build_interval_mesh(double length, std::span<const double> positions, ElementKind kind) {
  if (!is_line(kind)) {
    throw Error(ErrorCode::InvalidParameter, "interval meshes use line elements");
  }
  if (!(length > 0.0)) {
    throw Error(ErrorCode::NonPositiveLength, "interval length must be positive");
  }
  if (positions.size() < 2) {
    throw Error(ErrorCode::TooFewNodes, "an interval mesh needs at least 2 nodes");
  }
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw Error(ErrorCode::NonMonotonePositions,
                  "node positions must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  if (positions.front() != 0.0 || positions.back() != length) {
    throw Error(ErrorCode::NonMonotonePositions, "node positions must span [0, length]");
  }

  std::vector<Node> nodes;
  nodes.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    nodes.push_back({static_cast<int>(i + 1), Point(positions[i], 0.0)});
  }
  std::vector<Element> elements;
  elements.reserve(positions.size() - 1);
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    elements.push_back({id, kind, {id, id + 1}, 0});
  }
  return Mesh(1, std::move(nodes), std::move(elements));
}

Mesh build_uniform_interval_mesh(double length, std::size_t n_elements, ElementKind kind) {
  if (n_elements == 0) throw Error(ErrorCode::TooFewNodes, "need at least one element");
  std::vector<double> x(n_elements + 1);
  for (std::size_t i = 0; i <= n_elements; ++i) {
    x[i] = length * static_cast<double>(i) / static_cast<double>(n_elements);
  }
  x.back() = length;
  return build_interval_mesh(length, x, kind);
}

Mesh build_rectangle_mesh(std::size_t nx, std::size_t ny, double lx, double ly,
                          int boundary_tag) {
  if (nx == 0 || ny == 0) throw Error(ErrorCode::TooFewNodes, "need at least one cell");
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw Error(ErrorCode::NonPositiveLength, "rectangle sides must be positive");
  }
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<int>(j * (nx + 1) + i + 1); };

  std::vector<Node> nodes;
  nodes.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      nodes.push_back({id(i, j), Point(lx * static_cast<double>(i) / static_cast<double>(nx),
                                       ly * static_cast<double>(j) / static_cast<double>(ny))});
    }
  }

  std::vector<Element> cells;
  cells.reserve(2 * nx * ny);
  int eid = 1;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      cells.push_back({eid++, ElementKind::Tri3, {a, b, c}, 0});
      cells.push_back({eid++, ElementKind::Tri3, {a, c, d}, 0});
    }
  }

  std::vector<Element> edges;
  auto edge = [&](int p, int q) { edges.push_back({eid++, ElementKind::Line2, {p, q}, boundary_tag}); };
  for (std::size_t i = 0; i < nx; ++i) edge(id(i, 0), id(i + 1, 0));
  for (std::size_t j = 0; j < ny; ++j) edge(id(nx, j), id(nx, j + 1));
  for (std::size_t i = nx; i > 0; --i) edge(id(i, ny), id(i - 1, ny));
  for (std::size_t j = ny; j > 0; --j) edge(id(0, j), id(0, j - 1));

  return Mesh(2, std::move(nodes), std::move(cells), std::move(edges));
}

}  // namespace funcint
