#include "funcint/elements.hpp"

#include <cmath>
#include <string>

#include "funcint/error.hpp"

namespace funcint {
namespace {

void require_length(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::NonPositiveLength, "element length must be positive, got " +
                                                  std::to_string(h));
  }
}

void require_coefficient(double c, const char* name) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be positive");
  }
}

double checked_area(const TriangleCoords& v) {
  const double area = signed_area(v[0], v[1], v[2]);
  const double scale = std::max({(v[1] - v[0]).squaredNorm(), (v[2] - v[1]).squaredNorm(),
                                 (v[0] - v[2]).squaredNorm()});
  if (!(area > 1e-14 * scale)) {
    throw Error(ErrorCode::DegenerateTriangle, "triangle has zero or negative area");
  }
  return area;
}

}  // namespace

Eigen::Vector2d line2_values(double s) { return {1.0 - s, s}; }

Eigen::Vector4d hermite_values(double s, double h) {
  const double s2 = s * s, s3 = s2 * s;
  return {1.0 - 3.0 * s2 + 2.0 * s3, h * (s - 2.0 * s2 + s3), 3.0 * s2 - 2.0 * s3,
          h * (s3 - s2)};
}

Eigen::Vector4d hermite_dx(double s, double h) {
  const double s2 = s * s;
  return {(6.0 * s2 - 6.0 * s) / h, 1.0 - 4.0 * s + 3.0 * s2, (6.0 * s - 6.0 * s2) / h,
          3.0 * s2 - 2.0 * s};
}

Eigen::Vector4d hermite_dxx(double s, double h) {
  return {(12.0 * s - 6.0) / (h * h), (6.0 * s - 4.0) / h, (6.0 - 12.0 * s) / (h * h),
          (6.0 * s - 2.0) / h};
}

Eigen::Vector3d tri3_values(double r, double s) { return {1.0 - r - s, r, s}; }

Eigen::Matrix<double, 3, 2> tri3_gradients(const TriangleCoords& v) {
  const double two_a = 2.0 * checked_area(v);
  Eigen::Matrix<double, 3, 2> g;
  g << v[1].y() - v[2].y(), v[2].x() - v[1].x(),  //
      v[2].y() - v[0].y(), v[0].x() - v[2].x(),   //
      v[0].y() - v[1].y(), v[1].x() - v[0].x();
  return g / two_a;
}

ShapeFunctionSet::ShapeFunctionSet(ElementKind kind, double element_length)
    : kind_(kind), h_(element_length) {
  require_length(element_length);
}

std::size_t ShapeFunctionSet::n_funcs() const noexcept {
  switch (kind_) {
    case ElementKind::Line2: return 2;
    case ElementKind::HermiteLine2: return 4;
    case ElementKind::Tri3: return 3;
  }
  return 0;
}

Eigen::VectorXd ShapeFunctionSet::eval(const Point& ref) const {
  switch (kind_) {
    case ElementKind::Line2: return line2_values(ref.x());
    case ElementKind::HermiteLine2: return hermite_values(ref.x(), h_);
    case ElementKind::Tri3: return tri3_values(ref.x(), ref.y());
  }
  return {};
}

Eigen::MatrixXd ShapeFunctionSet::eval_grad(const Point& ref) const {
  switch (kind_) {
    case ElementKind::Line2: return Eigen::Vector2d(-1.0, 1.0);
    case ElementKind::HermiteLine2: return h_ * hermite_dx(ref.x(), h_);
    case ElementKind::Tri3: {
      Eigen::Matrix<double, 3, 2> g;
      g << -1.0, -1.0, 1.0, 0.0, 0.0, 1.0;
      return g;
    }
  }
  return {};
}

Eigen::VectorXd ShapeFunctionSet::eval_hess(const Point& ref) const {
  if (kind_ != ElementKind::HermiteLine2) {
    throw Error(ErrorCode::InvalidParameter, "second derivatives are only defined for Hermite");
  }
  return h_ * h_ * hermite_dxx(ref.x(), h_);
}

Eigen::Matrix2d stiffness_line2(double sigma, double h) {
  require_length(h);
  require_coefficient(sigma, "tension");
  Eigen::Matrix2d k;
  k << 1.0, -1.0, -1.0, 1.0;
  return (sigma / h) * k;
}

Eigen::Matrix2d mass_line2(double h) {
  require_length(h);
  Eigen::Matrix2d m;
  m << 2.0, 1.0, 1.0, 2.0;
  return (h / 6.0) * m;
}

Eigen::Matrix4d stiffness_hermite(double bending_stiffness, double h) {
  require_length(h);
  require_coefficient(bending_stiffness, "bending stiffness");
  const double h2 = h * h;
  Eigen::Matrix4d k;
  k << 12.0, 6.0 * h, -12.0, 6.0 * h,       //
      6.0 * h, 4.0 * h2, -6.0 * h, 2.0 * h2,  //
      -12.0, -6.0 * h, 12.0, -6.0 * h,        //
      6.0 * h, 2.0 * h2, -6.0 * h, 4.0 * h2;
  return (bending_stiffness / (h2 * h)) * k;
}

Eigen::Matrix4d mass_hermite(double h) {
  require_length(h);
  const double h2 = h * h;
  Eigen::Matrix4d m;
  m << 156.0, 22.0 * h, 54.0, -13.0 * h,         //
      22.0 * h, 4.0 * h2, 13.0 * h, -3.0 * h2,     //
      54.0, 13.0 * h, 156.0, -22.0 * h,            //
      -13.0 * h, -3.0 * h2, -22.0 * h, 4.0 * h2;
  return (h / 420.0) * m;
}

Eigen::Matrix3d stiffness_tri3(double sigma, const TriangleCoords& v) {
  require_coefficient(sigma, "tension");
  const double area = checked_area(v);
  const Eigen::Matrix<double, 3, 2> g = tri3_gradients(v);
  return sigma * area * g * g.transpose();
}

Eigen::Matrix3d mass_tri3(const TriangleCoords& v) {
  const double area = checked_area(v);
  Eigen::Matrix3d m;
  m << 2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0;
  return (area / 12.0) * m;
}

Eigen::Vector2d load_line2(double h, const Eigen::Vector2d& f) { return mass_line2(h) * f; }

Eigen::Vector4d load_hermite(double h, const Eigen::Vector2d& f) {
  require_length(h);
  // Integrals of each Hermite function against (1 - s) and s.
  return {h * (7.0 * f[0] + 3.0 * f[1]) / 20.0, h * h * (f[0] / 20.0 + f[1] / 30.0),
          h * (3.0 * f[0] + 7.0 * f[1]) / 20.0, -h * h * (f[0] / 30.0 + f[1] / 20.0)};
}

Eigen::Vector3d load_tri3(const TriangleCoords& v, const Eigen::Vector3d& f) {
  return mass_tri3(v) * f;
}

namespace {

double line_length(std::span<const Point> coords) {
  if (coords.size() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "line elements need 2 node coordinates");
  }
  return coords[1].x() - coords[0].x();
}

TriangleCoords triangle(std::span<const Point> coords) {
  if (coords.size() != 3) {
    throw Error(ErrorCode::DimensionMismatch, "triangles need 3 node coordinates");
  }
  return {coords[0], coords[1], coords[2]};
}

}  // namespace

Eigen::VectorXd consistent_load(ElementKind kind, std::span<const Point> coords,
                                std::span<const double> nodal_f) {
  if (nodal_f.size() != nodes_per_element(kind)) {
    throw Error(ErrorCode::DimensionMismatch, "one load value per element node is required");
  }
  switch (kind) {
    case ElementKind::Line2:
      return load_line2(line_length(coords), Eigen::Vector2d(nodal_f[0], nodal_f[1]));
    case ElementKind::HermiteLine2:
      return load_hermite(line_length(coords), Eigen::Vector2d(nodal_f[0], nodal_f[1]));
    case ElementKind::Tri3:
      return load_tri3(triangle(coords), Eigen::Vector3d(nodal_f[0], nodal_f[1], nodal_f[2]));
  }
  return {};
}

ElementMatrices element_matrices(ElementKind kind, std::span<const Point> coords,
                                 double coefficient, std::span<const double> nodal_f) {
  ElementMatrices out;
  switch (kind) {
    case ElementKind::Line2: {
      const double h = line_length(coords);
      out.k = stiffness_line2(coefficient, h);
      out.m = mass_line2(h);
      break;
    }
    case ElementKind::HermiteLine2: {
      const double h = line_length(coords);
      out.k = stiffness_hermite(coefficient, h);
      out.m = mass_hermite(h);
      break;
    }
    case ElementKind::Tri3: {
      const TriangleCoords v = triangle(coords);
      out.k = stiffness_tri3(coefficient, v);
      out.m = mass_tri3(v);
      break;
    }
  }
  if (!nodal_f.empty()) {
    out.f_vec = consistent_load(kind, coords, nodal_f);
  } else {
    out.f_vec = Eigen::VectorXd::Zero(out.k.rows());
  }
  return out;
}

}  // namespace funcint
