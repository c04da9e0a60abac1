#include <array>
#include <random>
#include <vector>

#include "doctest.h"
#include "funcint/elements.hpp"
#include "funcint/error.hpp"
#include "funcint/linalg.hpp"
#include "funcint/quadrature.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace funcint;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParameter;
}

double scale(const Eigen::MatrixXd& a) { return std::max(1.0, a.cwiseAbs().maxCoeff()); }

}  // namespace

TEST_CASE("gauss-legendre rules") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto q = gauss_legendre(n);
    for (std::size_t deg = 0; deg <= 2 * n - 1; ++deg) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += q.weights[i] * std::pow(q.points[i], deg);
      CHECK(sum == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rule") {
  const auto q = triangle_rule(4);
  double total = 0.0;
  for (double w : q.weights) total += w;
  CHECK(total == doctest::Approx(0.5));
  // int r^a s^b = a! b! / (a+b+2)!
  double sum = 0.0;
  for (std::size_t i = 0; i < q.weights.size(); ++i)
    sum += q.weights[i] * std::pow(q.r[i], 3) * std::pow(q.s[i], 3);
  CHECK(sum == doctest::Approx(36.0 / 40320.0).epsilon(1e-13));
}

TEST_CASE("partition of unity and nodal interpolation") {
  for (double s : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    CHECK(line2_values(s).sum() == doctest::Approx(1.0));
    for (double r : {0.0, 0.2, 0.6}) {
      if (r + s > 1.0) continue;
      CHECK(tri3_values(r, s).sum() == doctest::Approx(1.0));
    }
  }
  const double h = 0.7;
  const Eigen::Vector4d a = hermite_values(0.0, h), b = hermite_values(1.0, h);
  const Eigen::Vector4d da = hermite_dx(0.0, h), db = hermite_dx(1.0, h);
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(b[2] == doctest::Approx(1.0));
  CHECK(da[1] == doctest::Approx(1.0));
  CHECK(db[3] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(b[3] == doctest::Approx(0.0));
}

TEST_CASE("hermite functions match the interpolation basis") {
  for (double h : {0.3, 1.0, 2.5}) {
    const Eigen::Matrix4d c = oracle::hermite_coefficients(h);
    for (double s : {0.0, 0.21, 0.5, 0.9, 1.0}) {
      const Eigen::Vector4d v = hermite_values(s, h), dv = hermite_dx(s, h),
                            ddv = hermite_dxx(s, h);
      for (int a = 0; a < 4; ++a) {
        CHECK(v[a] == doctest::Approx(oracle::poly(c.col(a), s * h)).epsilon(1e-12));
        CHECK(dv[a] == doctest::Approx(oracle::poly(c.col(a), s * h, 1)).epsilon(1e-12));
        CHECK(ddv[a] == doctest::Approx(oracle::poly(c.col(a), s * h, 2)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("shape function set") {
  const ShapeFunctionSet line(ElementKind::Line2);
  CHECK(line.n_funcs() == 2);
  CHECK(line.eval_grad(Point(0.3, 0)).col(0).sum() == doctest::Approx(0.0));
  const ShapeFunctionSet tri(ElementKind::Tri3);
  CHECK(tri.n_funcs() == 3);
  CHECK(tri.eval_grad(Point(0.2, 0.3)).rows() == 3);
  CHECK(tri.eval_grad(Point(0.2, 0.3)).cols() == 2);
  const ShapeFunctionSet herm(ElementKind::HermiteLine2, 2.0);
  CHECK(herm.n_funcs() == 4);
  CHECK(herm.eval(Point(0.4, 0)).isApprox(hermite_values(0.4, 2.0)));
  CHECK(herm.eval_grad(Point(0.4, 0)).col(0).isApprox(2.0 * hermite_dx(0.4, 2.0)));
  CHECK(herm.eval_hess(Point(0.4, 0)).isApprox(4.0 * hermite_dxx(0.4, 2.0)));
}

TEST_CASE("element matrices against quadrature") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.1, 3.0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const double h = uni(rng), coef = uni(rng), f1 = normal(rng), f2 = normal(rng);
    const std::array<Point, 2> line = {Point(1.0, 0.0), Point(1.0 + h, 0.0)};
    const std::array<double, 2> fl = {f1, f2};

    const auto o2 = oracle::line2_element(coef, h, f1, f2);
    const auto e2 = element_matrices(ElementKind::Line2, line, coef, fl);
    CHECK(max_abs_diff(e2.k, o2.k) <= 1e-12 * scale(o2.k));
    CHECK(max_abs_diff(e2.m, o2.m) <= 1e-12 * scale(o2.m));
    CHECK(max_abs_diff(e2.f_vec, o2.f) <= 1e-12 * scale(o2.f));

    const auto oh = oracle::hermite_element(coef, h, f1, f2);
    const auto eh = element_matrices(ElementKind::HermiteLine2, line, coef, fl);
    CHECK(max_abs_diff(eh.k, oh.k) <= 1e-12 * scale(oh.k));
    CHECK(max_abs_diff(eh.m, oh.m) <= 1e-12 * scale(oh.m));
    CHECK(max_abs_diff(eh.f_vec, oh.f) <= 1e-12 * scale(oh.f));

    std::array<Point, 3> v;
    do {
      for (auto& p : v) p = Point(normal(rng), normal(rng));
    } while (std::abs(signed_area(v[0], v[1], v[2])) < 0.05);
    if (signed_area(v[0], v[1], v[2]) < 0) std::swap(v[1], v[2]);
    const Eigen::Vector3d ft(normal(rng), normal(rng), normal(rng));
    const std::array<double, 3> ftv = {ft[0], ft[1], ft[2]};
    const auto ot = oracle::tri3_element(coef, {v[0], v[1], v[2]}, ft);
    const auto et = element_matrices(ElementKind::Tri3, v, coef, ftv);
    CHECK(max_abs_diff(et.k, ot.k) <= 1e-12 * scale(ot.k));
    CHECK(max_abs_diff(et.m, ot.m) <= 1e-12 * scale(ot.m));
    CHECK(max_abs_diff(et.f_vec, ot.f) <= 1e-12 * scale(ot.f));
  }
}

TEST_CASE("element matrix structure") {
  const Eigen::Matrix2d k2 = stiffness_line2(2.0, 0.5);
  CHECK(k2(0, 0) == doctest::Approx(4.0));
  CHECK(k2(0, 1) == doctest::Approx(-4.0));
  CHECK((k2 * Eigen::Vector2d::Ones()).norm() < 1e-14);

  // Rigid motions of a beam carry no bending energy.
  const Eigen::Matrix4d kh = stiffness_hermite(1.5, 0.8);
  const Eigen::Vector4d translation(1.0, 0.0, 1.0, 0.0);
  const Eigen::Vector4d rotation(0.0, 1.0, 0.8, 1.0);
  CHECK((kh * translation).norm() < 1e-12);
  CHECK((kh * rotation).norm() < 1e-12);
  CHECK(is_symmetric(kh));

  const TriangleCoords t = {Point(0, 0), Point(2, 0), Point(0, 1)};
  CHECK(mass_tri3(t).sum() == doctest::Approx(1.0));
  CHECK((stiffness_tri3(1.0, t) * Eigen::Vector3d::Ones()).norm() < 1e-14);
  const Eigen::Matrix4d mh = mass_hermite(0.6);
  CHECK(mh(0, 0) + mh(0, 2) + mh(2, 0) + mh(2, 2) == doctest::Approx(0.6));
}

TEST_CASE("element errors") {
  CHECK(code_of([] { stiffness_line2(1.0, 0.0); }) == ErrorCode::NonPositiveLength);
  CHECK(code_of([] { mass_hermite(-1.0); }) == ErrorCode::NonPositiveLength);
  CHECK(code_of([] { stiffness_line2(0.0, 1.0); }) == ErrorCode::InvalidParameter);
  const TriangleCoords flat = {Point(0, 0), Point(1, 1), Point(2, 2)};
  CHECK(code_of([&] { stiffness_tri3(1.0, flat); }) == ErrorCode::DegenerateTriangle);
  const std::array<Point, 2> backwards = {Point(1, 0), Point(0, 0)};
  CHECK(code_of([&] { element_matrices(ElementKind::Line2, backwards, 1.0); }) ==
        ErrorCode::NonPositiveLength);
}
