#include <string>

#include "doctest.h"
#include "funcint/error.hpp"
#include "funcint/mesh.hpp"
#include "test_util.hpp"

using namespace funcint;

namespace {

const std::string kTriangle = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
3
1 0 0 0
2 1 0 0
3 0 1 0
$EndNodes
$Elements
1
1 2 2 0 1 1 2 3
$EndElements
)";

ParseError parse_error(const std::string& text) {
  try {
    parse_msh(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(ErrorCode::MalformedSection, 0, "");
}

std::string data(const char* name) { return read_file(std::string(FUNCINT_TEST_DATA) + "/" + name); }

}  // namespace

TEST_CASE("minimal triangle file") {
  const Mesh m = parse_msh(kTriangle);
  CHECK(m.spatial_dim() == 2);
  CHECK(m.node_count() == 3);
  REQUIRE(m.elements().size() == 1);
  CHECK(m.elements()[0].kind == ElementKind::Tri3);
}

TEST_CASE("clockwise triangles are reoriented") {
  std::string cw = kTriangle;
  cw.replace(cw.find("1 2 2 0 1 1 2 3"), 15, "1 2 2 0 1 1 3 2");
  const Mesh m = parse_msh(cw);
  const auto& e = m.elements()[0];
  CHECK(signed_area(m.coords(e.node_ids[0]), m.coords(e.node_ids[1]), m.coords(e.node_ids[2])) >
        0.0);
}

TEST_CASE("header and section errors") {
  CHECK(parse_error("").code() == ErrorCode::MalformedHeader);
  CHECK(std::string(parse_error("").what()).find("missing $MeshFormat") != std::string::npos);
  CHECK(parse_error(data("version41.msh")).code() == ErrorCode::UnsupportedVersion);
  CHECK(parse_error("$MeshFormat\n2.2 1 8\n$EndMeshFormat\n").code() ==
        ErrorCode::UnsupportedVersion);

  const ParseError unsupported = parse_error(data("unsupported.msh"));
  CHECK(unsupported.code() == ErrorCode::UnsupportedElementType);
  CHECK(unsupported.line() == 14);

  std::string dangling = kTriangle;
  dangling.replace(dangling.find("1 2 2 0 1 1 2 3"), 15, "1 2 2 0 1 1 2 9");
  CHECK(parse_error(dangling).code() == ErrorCode::DanglingNodeReference);

  std::string truncated = kTriangle.substr(0, kTriangle.find("$Elements"));
  CHECK(parse_error(truncated).code() == ErrorCode::MalformedSection);

  std::string bad_number = kTriangle;
  bad_number.replace(bad_number.find("2 1 0 0"), 7, "2 x 0 0");
  const ParseError e = parse_error(bad_number);
  CHECK(e.code() == ErrorCode::MalformedSection);
  CHECK(e.line() == 7);
}

TEST_CASE("whitespace and line endings are tolerated") {
  std::string crlf;
  for (char c : kTriangle) {
    if (c == '\n') crlf += "  \r\n\n";
    else crlf += c;
  }
  const Mesh m = parse_msh(crlf);
  CHECK(m.elements().size() == 1);
}

TEST_CASE("bundled line mesh") {
  const Mesh m = parse_msh(data("line.msh"));
  CHECK(m.spatial_dim() == 1);
  CHECK(m.node_count() == 5);
  CHECK(m.elements().size() == 4);
  CHECK(m.h() == doctest::Approx(0.375));
  for (const auto& e : m.elements()) {
    CHECK(m.coords(e.node_ids[0]).x() < m.coords(e.node_ids[1]).x());
    CHECK(e.physical_tag == 3);
  }
}

TEST_CASE("bundled triangle mesh") {
  const Mesh m = parse_msh(data("square.msh"));
  CHECK(m.spatial_dim() == 2);
  CHECK(m.node_count() == 10);
  CHECK(m.elements().size() == 10);
  CHECK(m.boundary().size() == 8);
  double area = 0.0;
  for (const auto& e : m.elements()) {
    const double a =
        signed_area(m.coords(e.node_ids[0]), m.coords(e.node_ids[1]), m.coords(e.node_ids[2]));
    CHECK(a > 0.0);
    CHECK(e.physical_tag == 2);
    area += a;
  }
  CHECK(area == doctest::Approx(1.0));
}

TEST_CASE("point-only nodes are dropped") {
  const std::string text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
3
1 0 0 0
2 1 0 0
7 5 0 0
$EndNodes
$Elements
2
1 15 2 0 0 7
2 1 2 0 0 1 2
$EndElements
)";
  const Mesh m = parse_msh(text);
  CHECK(m.node_count() == 2);
  CHECK_FALSE(m.has_node(7));
}

TEST_CASE("re-serialized counts are stable") {
  for (const char* name : {"line.msh", "square.msh"}) {
    const Mesh a = parse_msh(data(name));
    const Mesh b = parse_msh(to_msh(a));
    const Mesh c = parse_msh(to_msh(b));
    CHECK(b.node_count() == a.node_count());
    CHECK(b.elements().size() == a.elements().size());
    CHECK(b.boundary().size() == a.boundary().size());
    CHECK(to_msh(b) == to_msh(c));
  }
}
