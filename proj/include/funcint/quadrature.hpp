#pragma once

#include <cstddef>
#include <vector>

namespace funcint {

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(std::size_t n);

struct TriangleQuadrature {
  std::vector<double> r;  ///< reference coordinates on the unit right triangle
  std::vector<double> s;
  std::vector<double> weights;  ///< sum to 1/2
};

/// Collapsed (Duffy) tensor rule on the reference triangle; exact for
/// polynomials of total degree 2n-2.
TriangleQuadrature triangle_rule(std::size_t n);

}  // namespace funcint
