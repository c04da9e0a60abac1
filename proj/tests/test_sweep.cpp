#include <vector>

#include "doctest.h"
#include "funcint/error.hpp"
#include "funcint/gaussian.hpp"
#include "funcint/models.hpp"
#include "funcint/sweep.hpp"

using namespace funcint;

TEST_CASE("beta sweep of a string") {
  const Mesh m = build_uniform_interval_mesh(1.0, 8);
  const ModelSystem s = build_string({1.0, 1.0, Load{1.0}, 0.0, 0.0}, m);
  const std::vector<double> betas = {0.5, 1.0, 4.0};
  const Table t = sweep(s, SweepVariable::Beta, betas);
  CHECK(t.columns == std::vector<std::string>{"beta", "log_Z", "min_energy", "mean_energy",
                                              "mean_norm"});
  REQUIRE(t.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const GaussianStats g = moments({betas[i], s.form}, false);
    CHECK(t.rows[i][0] == betas[i]);
    CHECK(t.rows[i][1] == g.log_Z);
    CHECK(t.rows[i][3] == doctest::Approx(g.min_energy + 7.0 / (2.0 * betas[i])));
    CHECK(t.rows[i][4] == doctest::Approx(g.mean.norm()));
  }
}

TEST_CASE("parallel and serial sweeps agree") {
  AdhesionParams p;
  std::vector<double> u;
  for (int i = 0; i <= 12; ++i) u.push_back(0.25 * i);
  const std::vector<double> betas = {15.0, 4.0, 1.0};
  const Table a = sweep(p, SweepVariable::UBar, u, betas);
  const Table b = sweep_serial(p, SweepVariable::UBar, u, betas);
  CHECK(a.columns == b.columns);
  CHECK(a.rows == b.rows);
  REQUIRE(a.rows.size() == 39);
  // beta-major ordering
  CHECK(a.rows[0][1] == 15.0);
  CHECK(a.rows[12][1] == 15.0);
  CHECK(a.rows[13][1] == 4.0);
  CHECK(a.rows[14][0] == 0.25);
}

TEST_CASE("sweep errors") {
  const Mesh m = build_uniform_interval_mesh(1.0, 4);
  const ModelSystem s = build_string({1.0, 1.0, Load{}, 0.0, 0.0}, m);
  const std::vector<double> v = {1.0};
  try {
    sweep(s, SweepVariable::UBar, v, v);
    FAIL("expected InvalidParameter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameter);
  }
  const std::vector<double> bad = {1.0, -1.0, 2.0};
  try {
    sweep(s, SweepVariable::Beta, bad);
    FAIL("expected InvalidParameter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameter);
  }
  CHECK(sweep(s, SweepVariable::Beta, {}).rows.empty());
}
