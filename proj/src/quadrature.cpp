#include "funcint/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "funcint/error.hpp"

namespace funcint {

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidParameter, "quadrature needs at least one point");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const double dn = static_cast<double>(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess, then map [-1,1] -> [0,1].
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double dk = static_cast<double>(k);
      const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : dn * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

TriangleQuadrature triangle_rule(std::size_t n) {
  const QuadratureRule g = gauss_legendre(n);
  TriangleQuadrature t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = g.points[i];
      const double b = g.points[j];
      // (a, b) in the unit square -> (r, s) = (a, b (1 - a)), Jacobian (1 - a).
      t.r.push_back(a);
      t.s.push_back(b * (1.0 - a));
      t.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - a));
    }
  }
  return t;
}

}  // namespace funcint
