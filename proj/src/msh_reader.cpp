// Gmsh MSH 2.2 ASCII reader: $MeshFormat, $Nodes and $Elements are required,
// every other section is skipped. Element types 1 (line), 2 (triangle) and
// 15 (point, ignored) are accepted.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "funcint/error.hpp"
#include "funcint/mesh.hpp"

namespace funcint {
namespace {

constexpr int kMshLine = 1;
constexpr int kMshTriangle = 2;
constexpr int kMshPoint = 15;

class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : text_(text) {}

  // Next line with surrounding whitespace stripped; blank lines are skipped.
  bool next(std::string& out) {
    while (pos_ < text_.size()) {
      auto end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_;
      const auto first = raw.find_first_not_of(" \t\r");
      if (first == std::string_view::npos) continue;
      const auto last = raw.find_last_not_of(" \t\r");
      out.assign(raw.substr(first, last - first + 1));
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

template <typename T>
T read_value(std::istringstream& in, const LineCursor& cur, const char* what) {
  T v{};
  if (!(in >> v)) {
    throw ParseError(ErrorCode::MalformedSection, cur.line(), std::string("expected ") + what);
  }
  return v;
}

std::string require_line(LineCursor& cur, const char* context) {
  std::string s;
  if (!cur.next(s)) {
    throw ParseError(ErrorCode::MalformedSection, cur.line() + 1,
                     std::string("unexpected end of file in ") + context);
  }
  return s;
}

void expect_end(LineCursor& cur, const std::string& name) {
  const std::string s = require_line(cur, name.c_str());
  if (s != "$End" + name) {
    throw ParseError(ErrorCode::MalformedSection, cur.line(), "expected $End" + name);
  }
}

struct RawElement {
  int id;
  int type;
  int physical;
  std::vector<int> nodes;
  std::size_t line;
};

}  // namespace

Mesh parse_msh(std::string_view text) {
  LineCursor cur(text);
  std::string s;

  if (!cur.next(s) || s != "$MeshFormat") {
    throw ParseError(ErrorCode::MalformedHeader, std::max<std::size_t>(cur.line(), 1),
                     "missing $MeshFormat");
  }
  {
    std::istringstream in(require_line(cur, "$MeshFormat"));
    std::string version;
    int file_type = -1;
    int data_size = 0;
    if (!(in >> version >> file_type >> data_size)) {
      throw ParseError(ErrorCode::MalformedHeader, cur.line(),
                       "expected 'version file-type data-size'");
    }
    if (version.rfind("2.", 0) != 0) {
      throw ParseError(ErrorCode::UnsupportedVersion, cur.line(),
                       "MSH version " + version + " is not supported (need 2.2)");
    }
    if (file_type != 0) {
      throw ParseError(ErrorCode::UnsupportedVersion, cur.line(), "binary MSH is not supported");
    }
    expect_end(cur, "MeshFormat");
  }

  std::vector<Node> nodes;
  std::unordered_map<int, std::size_t> node_line;
  std::vector<double> z_coords;
  std::vector<RawElement> raw;
  bool have_nodes = false;
  bool have_elements = false;

  while (cur.next(s)) {
    if (s == "$Nodes") {
      std::istringstream head(require_line(cur, "$Nodes"));
      const auto count = read_value<long long>(head, cur, "node count");
      if (count < 0) throw ParseError(ErrorCode::MalformedSection, cur.line(), "negative count");
      nodes.reserve(static_cast<std::size_t>(count));
      for (long long i = 0; i < count; ++i) {
        std::istringstream in(require_line(cur, "$Nodes"));
        const int id = read_value<int>(in, cur, "node id");
        const double x = read_value<double>(in, cur, "x coordinate");
        const double y = read_value<double>(in, cur, "y coordinate");
        const double z = read_value<double>(in, cur, "z coordinate");
        if (!node_line.emplace(id, cur.line()).second) {
          throw ParseError(ErrorCode::MalformedSection, cur.line(),
                           "duplicate node id " + std::to_string(id));
        }
        nodes.push_back({id, Point(x, y)});
        z_coords.push_back(z);
      }
      expect_end(cur, "Nodes");
      have_nodes = true;
    } else if (s == "$Elements") {
      std::istringstream head(require_line(cur, "$Elements"));
      const auto count = read_value<long long>(head, cur, "element count");
      if (count < 0) throw ParseError(ErrorCode::MalformedSection, cur.line(), "negative count");
      for (long long i = 0; i < count; ++i) {
        std::istringstream in(require_line(cur, "$Elements"));
        RawElement e;
        e.line = cur.line();
        e.id = read_value<int>(in, cur, "element id");
        e.type = read_value<int>(in, cur, "element type");
        const int ntags = read_value<int>(in, cur, "tag count");
        e.physical = 0;
        for (int t = 0; t < ntags; ++t) {
          const int tag = read_value<int>(in, cur, "tag");
          if (t == 0) e.physical = tag;
        }
        std::size_t nn = 0;
        switch (e.type) {
          case kMshLine: nn = 2; break;
          case kMshTriangle: nn = 3; break;
          case kMshPoint: nn = 1; break;
          default:
            throw ParseError(ErrorCode::UnsupportedElementType, cur.line(),
                             "element type " + std::to_string(e.type) + " is not supported");
        }
        for (std::size_t k = 0; k < nn; ++k) e.nodes.push_back(read_value<int>(in, cur, "node id"));
        if (e.type != kMshPoint) raw.push_back(std::move(e));
      }
      expect_end(cur, "Elements");
      have_elements = true;
    } else if (s.size() > 1 && s[0] == '$' && s.rfind("$End", 0) != 0) {
      // Unknown section: skip to its terminator.
      const std::string end = "$End" + s.substr(1);
      std::string t;
      bool closed = false;
      while (cur.next(t)) {
        if (t == end) {
          closed = true;
          break;
        }
      }
      if (!closed) {
        throw ParseError(ErrorCode::MalformedSection, cur.line(), "unterminated section " + s);
      }
    } else {
      throw ParseError(ErrorCode::MalformedSection, cur.line(), "unexpected content '" + s + "'");
    }
  }

  if (!have_nodes) throw ParseError(ErrorCode::MalformedSection, cur.line(), "missing $Nodes");
  if (!have_elements) {
    throw ParseError(ErrorCode::MalformedSection, cur.line(), "missing $Elements");
  }

  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i].id, i);
  for (const auto& e : raw) {
    for (int id : e.nodes) {
      if (!index.contains(id)) {
        throw ParseError(ErrorCode::DanglingNodeReference, e.line,
                         "element " + std::to_string(e.id) + " references missing node " +
                             std::to_string(id));
      }
    }
  }

  const bool planar = std::any_of(raw.begin(), raw.end(),
                                  [](const RawElement& e) { return e.type == kMshTriangle; });
  const int dim = planar ? 2 : 1;
  if (raw.empty()) {
    throw ParseError(ErrorCode::MalformedSection, cur.line(), "no line or triangle elements");
  }

  std::vector<Element> cells;
  std::vector<Element> boundary;
  for (const auto& e : raw) {
    Element el{e.id, e.type == kMshTriangle ? ElementKind::Tri3 : ElementKind::Line2, e.nodes,
               e.physical};
    auto p = [&](int k) -> const Point& { return nodes[index.at(el.node_ids[k])].coords; };
    if (el.kind == ElementKind::Tri3) {
      if (signed_area(p(0), p(1), p(2)) < 0.0) std::swap(el.node_ids[1], el.node_ids[2]);
      cells.push_back(std::move(el));
    } else if (planar) {
      boundary.push_back(std::move(el));
    } else {
      if (p(0).x() > p(1).x()) std::swap(el.node_ids[0], el.node_ids[1]);
      cells.push_back(std::move(el));
    }
  }

  // Keep only nodes used by a retained element; point-only nodes drop out.
  std::unordered_set<int> used;
  for (const auto& e : cells) used.insert(e.node_ids.begin(), e.node_ids.end());
  for (const auto& e : boundary) used.insert(e.node_ids.begin(), e.node_ids.end());
  std::vector<Node> kept;
  kept.reserve(used.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!used.contains(nodes[i].id)) continue;
    if (dim == 1 && (nodes[i].coords.y() != 0.0 || z_coords[i] != 0.0)) {
      throw ParseError(ErrorCode::MalformedSection, node_line.at(nodes[i].id),
                       "line-only meshes must lie on the x axis");
    }
    kept.push_back(nodes[i]);
  }

  try {
    return Mesh(dim, std::move(kept), std::move(cells), std::move(boundary));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(err.code(), cur.line(), err.what());
  }
}

Mesh read_msh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open mesh file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_msh(buf.str());
}

std::string to_msh(const Mesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.node_count() << "\n";
  for (const auto& n : mesh.nodes()) {
    out << n.id << ' ' << n.coords.x() << ' ' << n.coords.y() << " 0\n";
  }
  out << "$EndNodes\n$Elements\n" << mesh.elements().size() + mesh.boundary().size() << "\n";
  auto write = [&](const Element& e) {
    out << e.id << ' ' << (e.kind == ElementKind::Tri3 ? kMshTriangle : kMshLine) << " 2 "
        << e.physical_tag << " 0";
    for (int id : e.node_ids) out << ' ' << id;
    out << "\n";
  };
  for (const auto& e : mesh.elements()) write(e);
  for (const auto& e : mesh.boundary()) write(e);
  out << "$EndElements\n";
  return out.str();
}

}  // namespace funcint
