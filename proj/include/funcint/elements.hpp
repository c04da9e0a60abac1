#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "funcint/mesh.hpp"

namespace funcint {

using TriangleCoords = std::array<Point, 3>;

// Shape functions. Line elements use s in [0, 1] with x = x1 + s h.
// Hermite dof order is (u1, u1_x, u2, u2_x).

Eigen::Vector2d line2_values(double s);
Eigen::Vector4d hermite_values(double s, double h);
/// d/dx of the Hermite functions.
Eigen::Vector4d hermite_dx(double s, double h);
/// d2/dx2 of the Hermite functions.
Eigen::Vector4d hermite_dxx(double s, double h);
/// Barycentric values at reference point (r, s) of the unit right triangle.
Eigen::Vector3d tri3_values(double r, double s);
/// Physical gradients of the three linear functions (rows), constant per triangle.
Eigen::Matrix<double, 3, 2> tri3_gradients(const TriangleCoords& v);

/// Shape functions of one element kind on its reference element.
///
/// Derivatives are taken with respect to the reference coordinate(s). Hermite
/// slope functions depend on the physical element length, which is fixed at
/// construction.
class ShapeFunctionSet {
 public:
  explicit ShapeFunctionSet(ElementKind kind, double element_length = 1.0);

  ElementKind kind() const noexcept { return kind_; }
  std::size_t n_funcs() const noexcept;

  Eigen::VectorXd eval(const Point& ref) const;
  /// n_funcs x reference dimension.
  Eigen::MatrixXd eval_grad(const Point& ref) const;
  /// Second reference derivative, HermiteLine2 only.
  Eigen::VectorXd eval_hess(const Point& ref) const;

 private:
  ElementKind kind_;
  double h_;
};

// Closed-form element matrices.

Eigen::Matrix2d stiffness_line2(double sigma, double h);
Eigen::Matrix2d mass_line2(double h);
Eigen::Matrix4d stiffness_hermite(double bending_stiffness, double h);
Eigen::Matrix4d mass_hermite(double h);
Eigen::Matrix3d stiffness_tri3(double sigma, const TriangleCoords& v);
Eigen::Matrix3d mass_tri3(const TriangleCoords& v);

/// Integral of phi * f^h over the element, f^h interpolated linearly from the
/// nodal values `f`. For Hermite elements only the two nodal values enter.
Eigen::Vector2d load_line2(double h, const Eigen::Vector2d& f);
Eigen::Vector4d load_hermite(double h, const Eigen::Vector2d& f);
Eigen::Vector3d load_tri3(const TriangleCoords& v, const Eigen::Vector3d& f);

struct ElementMatrices {
  Eigen::MatrixXd k;
  Eigen::MatrixXd m;
  Eigen::VectorXd f_vec;
};

/// Stiffness, mass and consistent load for one element. `coefficient` is the
/// tension (Line2, Tri3) or bending stiffness (HermiteLine2); `nodal_f` holds
/// one load value per element node and may be empty.
ElementMatrices element_matrices(ElementKind kind, std::span<const Point> coords,
                                 double coefficient, std::span<const double> nodal_f = {});

Eigen::VectorXd consistent_load(ElementKind kind, std::span<const Point> coords,
                                std::span<const double> nodal_f);

}  // namespace funcint
