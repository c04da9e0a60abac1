// Acceptance criteria: one PASS/FAIL line each; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "funcint/assembly.hpp"
#include "funcint/elements.hpp"
#include "funcint/error.hpp"
#include "funcint/field.hpp"
#include "funcint/gaussian.hpp"
#include "funcint/mesh.hpp"
#include "funcint/models.hpp"
#include "funcint/sampler.hpp"
#include "funcint/sweep.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace funcint;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_scale(const Eigen::MatrixXd& a) { return std::max(1.0, a.cwiseAbs().maxCoeff()); }

// 1 -------------------------------------------------------------------------

Outcome element_oracles() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(0.05, 4.0);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  auto track = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
    worst = std::max(worst, max_abs_diff(a, ref) / rel_scale(ref));
  };
  for (int i = 0; i < 50; ++i) {
    const double h = uni(rng), coef = uni(rng), f1 = normal(rng), f2 = normal(rng);
    const auto line = oracle::line2_element(coef, h, f1, f2);
    track(stiffness_line2(coef, h), line.k);
    track(mass_line2(h), line.m);
    const auto herm = oracle::hermite_element(coef, h, f1, f2);
    track(stiffness_hermite(coef, h), herm.k);
    track(load_hermite(h, Eigen::Vector2d(f1, f2)), herm.f);

    TriangleCoords v;
    do {
      for (auto& p : v) p = Point(2.0 * normal(rng), 2.0 * normal(rng));
    } while (std::abs(signed_area(v[0], v[1], v[2])) < 0.05);
    if (signed_area(v[0], v[1], v[2]) < 0) std::swap(v[1], v[2]);
    const auto tri = oracle::tri3_element(coef, {v[0], v[1], v[2]}, Eigen::Vector3d::Zero());
    track(stiffness_tri3(coef, v), tri.k);
  }
  return {worst <= 1e-12, fmt("50 instances, max relative deviation %.2e", worst)};
}

// 2 -------------------------------------------------------------------------

Outcome string_nodal_exactness() {
  const double length = 1.7, sigma = 0.6, f = 1.3;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  for (int n : {2, 5, 17}) {
    std::vector<double> x(n + 1);
    double acc = 0.0;
    std::vector<double> w(n);
    for (auto& v : w) acc += (v = 0.2 + uni(rng));
    x[0] = 0.0;
    for (int i = 0; i < n; ++i) x[i + 1] = x[i] + length * w[i] / acc;
    x[n] = length;
    const Mesh m = build_interval_mesh(length, x);
    const ModelSystem s = build_string({length, sigma, Load{f}, 0.0, 0.0}, m);
    for (double beta : {0.5, 5.0}) {
      const GaussianStats g = moments({beta, s.form}, false);
      for (double xi : x) {
        const double exact = f * xi * (length - xi) / (2 * sigma);
        worst = std::max(worst, std::abs(mean_field(g, s.mesh, s.dofs, Point(xi, 0)) - exact));
      }
    }
  }
  return {worst <= 1e-10, fmt("meshes of 2/5/17 elements, beta 0.5/5, max |error| %.2e", worst)};
}

// 3 -------------------------------------------------------------------------

Outcome beam_cantilever() {
  const double length = 1.5, kb = 0.7, f = 2.0;
  const Mesh m = build_uniform_interval_mesh(length, 4);
  BeamParams p;
  p.length = length;
  p.bending_stiffness = kb;
  p.load = Load{f};
  const ModelSystem s = build_beam(p, m);
  const GaussianStats g = moments({1.0, s.form}, false);
  double tip = NAN, rot = NAN;
  for (std::size_t i = 0; i < s.form.labels.size(); ++i) {
    if (s.form.labels[i].node_id != 5) continue;
    (s.form.labels[i].local_dof == 0 ? tip : rot) = g.mean[i];
  }
  const double tip_ref = f * std::pow(length, 4) / (8 * kb);
  const double rot_ref = f * std::pow(length, 3) / (6 * kb);
  const double e1 = rel_diff(tip, tip_ref), e2 = rel_diff(rot, rot_ref);
  return {e1 <= 1e-9 && e2 <= 1e-9,
          fmt("tip %.12g (exact %.12g), rotation %.12g (exact %.12g)", tip, tip_ref, rot, rot_ref)};
}

// 4 -------------------------------------------------------------------------

Outcome convergence_order() {
  const double pi = std::numbers::pi;
  std::vector<double> hs, errs;
  for (int n : {4, 8, 16, 32, 64}) {
    const Mesh m = build_uniform_interval_mesh(1.0, n);
    const ModelSystem s =
        build_string({1.0, 1.0, Load{[pi](const Point& p) { return std::sin(pi * p.x()); }}, 0, 0},
                     m);
    const GaussianStats g = moments({1.0, s.form}, false);
    std::vector<double> u(n + 1);
    for (int i = 0; i <= n; ++i) u[i] = mean_field(g, s.mesh, s.dofs, Point(double(i) / n, 0));
    double e2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = double(i) / n, b = double(i + 1) / n;
      e2 += oracle::integrate(
          [&](double x) {
            const double uh = u[i] + (u[i + 1] - u[i]) * (x - a) / (b - a);
            const double d = uh - std::sin(pi * x) / (pi * pi);
            return d * d;
          },
          a, b, 4);
    }
    hs.push_back(1.0 / n);
    errs.push_back(std::sqrt(e2));
  }
  // Least-squares slope of log error against log h.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    mx += std::log(hs[i]) / hs.size();
    my += std::log(errs[i]) / hs.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    sxy += (std::log(hs[i]) - mx) * (std::log(errs[i]) - my);
    sxx += (std::log(hs[i]) - mx) * (std::log(hs[i]) - mx);
  }
  const double order = sxy / sxx;
  return {std::abs(order - 2.0) <= 0.2,
          fmt("L2 order %.4f over h = 1/4..1/64 (errors %.3e .. %.3e)", order, errs.front(),
              errs.back())};
}

// 5 -------------------------------------------------------------------------

Outcome gaussian_identities() {
  std::mt19937_64 rng(505);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> beta_dist(0.2, 5.0);
  double worst_c = 0, worst_eq = 0, worst_z = 0;
  int quad_checked = 0;
  for (int i = 0; i < 25; ++i) {
    const int n = i < 9 ? 1 + i % 3 : 4 + (i - 9);
    QuadraticForm q;
    q.K = oracle::random_spd(n, rng, 0.3, 5.0);
    q.b = Eigen::VectorXd(n);
    for (auto& v : q.b) v = normal(rng);
    q.c = normal(rng);
    const double beta = beta_dist(rng);
    const GaussianStats g = moments({beta, q});
    worst_c = std::max(worst_c, max_abs_diff(g.covariance * (beta * q.K),
                                             Eigen::MatrixXd::Identity(n, n)));
    worst_eq = std::max(worst_eq, std::abs(g.mean_energy - g.min_energy - n / (2 * beta)));
    if (n <= 3) {
      const double ref = oracle::log_partition_by_quadrature(q.K, q.b, q.c, beta);
      worst_z = std::max(worst_z, std::abs(g.log_Z - ref) / std::max(1.0, std::abs(ref)));
      ++quad_checked;
    }
  }
  return {worst_c <= 1e-10 && worst_eq <= 1e-10 && worst_z <= 1e-6,
          fmt("|C bK - I| %.1e, equipartition %.1e, log_Z vs quadrature %.1e (%d forms)", worst_c,
              worst_eq, worst_z, quad_checked)};
}

// 6 -------------------------------------------------------------------------

struct McmcRun {
  std::vector<double> value, se;
};

McmcRun string_chain(const ModelSystem& s, const ChainConfig& cfg) {
  QuadraticEnergy model(s.form);
  const std::vector<double> init(s.form.n(), 0.0);
  const QuadraticForm& q = s.form;
  const Estimate e = metropolis(
      model, 1.0, init,
      [&q](std::span<const double> d) {
        std::vector<double> out(d.begin(), d.end());
        out.push_back(energy(q, Eigen::Map<const Eigen::VectorXd>(d.data(), d.size())));
        return out;
      },
      cfg);
  return {e.value, e.std_error};
}

Outcome mcmc_string() {
  struct Case {
    int n_elements;
    std::size_t steps, thin;
  };
  const Case cases[] = {{2, 200000, 1}, {10, 1000000, 10}, {50, 3000000, 30}};
  std::ostringstream detail;
  bool pass = true;
  double worst_z = 0.0;
  for (const auto& c : cases) {
    const Mesh m = build_uniform_interval_mesh(1.0, c.n_elements);
    const ModelSystem s = build_string({1.0, 1.0, Load{1.0}, 0.0, 0.0}, m);
    const GaussianStats g = moments({1.0, s.form}, false);
    const double h = 1.0 / c.n_elements;
    const ChainConfig cfg{c.steps + c.steps / 20, c.steps / 20, 2.0 * std::sqrt(h / 2), 60606,
                          c.thin};
    const McmcRun run = string_chain(s, cfg);
    const McmcRun again = string_chain(s, cfg);
    const bool repro = run.value == again.value && run.se == again.se;
    const std::size_t n = s.form.n();
    int outside = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double exact = i < n ? g.mean[i] : g.mean_energy;
      const double z = std::abs(run.value[i] - exact) / run.se[i];
      worst_z = std::max(worst_z, z);
      if (!(z <= 3.0)) ++outside;
    }
    pass &= repro && outside == 0;
    detail << "N=" << n << ": " << outside << " outside 3 SE"
           << (repro ? ", reproducible; " : ", NOT reproducible; ");
  }
  detail << fmt("max |dev|/SE %.2f", worst_z);
  return {pass, detail.str()};
}

// 7 -------------------------------------------------------------------------

Outcome adhesion_sampled() {
  AdhesionParams p;  // k U^2 / E0 = 5, N = 6, E0 = 1
  p.u_bar = p.broken_length;
  const double beta = 2.0 / p.energy_scale();
  const SpinEnsemble se = build_spin_ensemble(p, beta);
  const double exact = spin_observables(se).mean_xi;
  SpinQuadraticEnergy model(se.forms, 6);
  const std::vector<double> init(se.forms.front().n(), 0.0);
  const Estimate e = metropolis_with_spin(
      model, beta, init, 6,
      [](std::span<const double>, std::size_t xi) {
        return std::vector<double>{static_cast<double>(xi)};
      },
      {2100000, 100000, 0.02, 70707, 20});
  const double z = std::abs(e.value[0] - exact) / e.std_error[0];
  return {z <= 3.0, fmt("<xi> sampled %.5f +- %.5f, exact %.5f (%.2f SE, acceptance %.2f)",
                        e.value[0], e.std_error[0], exact, z, e.acceptance_rate)};
}

// 8 -------------------------------------------------------------------------

double free_energy_derivative(AdhesionParams p, double beta, double u) {
  // Fourth-order central difference of -(1/beta) ln Z.
  auto lnz = [&](double x) {
    p.u_bar = x;
    return spin_observables(build_spin_ensemble(p, beta)).log_Z_total;
  };
  const double e = 1e-3;
  const double d = (-lnz(u + 2 * e) + 8 * lnz(u + e) - 8 * lnz(u - e) + lnz(u - 2 * e)) / (12 * e);
  return -d / beta;
}

Outcome adhesion_shape() {
  AdhesionParams p;
  const double e0 = p.energy_scale(), U = p.broken_length;
  std::vector<double> u;
  for (int i = 0; i <= 60; ++i) u.push_back(3.0 * U * i / 60.0);
  const std::vector<double> beta_e0 = {15, 10, 6, 4, 3, 2, 1};
  std::vector<double> betas;
  for (double b : beta_e0) betas.push_back(b / e0);
  const Table t = sweep(p, SweepVariable::UBar, u, betas);

  bool monotone = true;
  std::vector<double> max_slope(betas.size(), 0.0);
  for (std::size_t b = 0; b < betas.size(); ++b) {
    for (std::size_t i = 1; i < u.size(); ++i) {
      const double prev = t.rows[b * u.size() + i - 1][3], cur = t.rows[b * u.size() + i][3];
      if (b == 0 && cur > prev + 1e-12) monotone = false;
      max_slope[b] = std::max(max_slope[b], std::abs(cur - prev) / (u[i] - u[i - 1]));
    }
  }
  const double start = t.rows[0][3];
  bool smoother = true;
  for (std::size_t b = 1; b < betas.size(); ++b) smoother &= max_slope[b] < max_slope[b - 1];

  p.u_bar = 0.0;
  const double f0 = mean_force(p, betas.front());

  double worst = 0.0;
  for (double beta : {betas.front(), betas[5]}) {
    for (int i = 1; i <= 20; ++i) {
      const double ub = 0.15 * U * i;
      p.u_bar = ub;
      const double analytic = mean_force(p, beta);
      const double fd = free_energy_derivative(p, beta, ub);
      worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
    }
  }
  std::ostringstream slopes;
  for (double s : max_slope) slopes << fmt("%.3g ", s);
  const bool pass = monotone && std::abs(start - 6.0) <= 0.05 && smoother &&
                    std::abs(f0) <= 1e-10 && worst <= 1e-6;
  return {pass, fmt("<xi>(0) %.4f, non-increasing %s, max slopes ", start,
                    monotone ? "yes" : "no") +
                    slopes.str() +
                    fmt("(decreasing %s), <f>(0) %.1e, force vs finite difference %.1e",
                        smoother ? "yes" : "no", f0, worst)};
}

// 9 -------------------------------------------------------------------------

Outcome membrane_center() {
  const double series = oracle::square_poisson_center();
  double worst_rel = 0.0, worst_solve = 0.0, max_h = 0.0;
  for (std::size_t n : {24, 32, 48}) {
    const Mesh m = build_rectangle_mesh(n, n);
    max_h = std::max(max_h, m.h());
    const ModelSystem s = build_membrane({m, 1.0, Load{1.0}, {{1, 0.0}}});
    const GaussianStats g = moments({1.0, s.form}, false);
    const double center = mean_field(g, s.mesh, s.dofs, Point(0.5, 0.5));
    worst_rel = std::max(worst_rel, std::abs(center - series) / series);
    const Eigen::VectorXd direct = s.form.K.partialPivLu().solve(-s.form.b);
    worst_solve = std::max(worst_solve, (direct - g.mean).cwiseAbs().maxCoeff());
  }
  return {worst_rel <= 0.02 && worst_solve <= 1e-12 && max_h <= 1.0 / 16,
          fmt("series %.7f, max relative error %.2e, vs LU solve %.1e, h <= %.4f", series,
              worst_rel, worst_solve, max_h)};
}

// 10 ------------------------------------------------------------------------

std::string run_cli(const std::string& args, int& status) {
  namespace fs = std::filesystem;
  const fs::path out = fs::temp_directory_path() / "funcint_acceptance_cli.txt";
  const std::string cmd = std::string("\"") + FUNCINT_CLI_PATH + "\" " + args + " > \"" +
                          out.string() + "\" 2>&1";
  status = std::system(cmd.c_str());
  std::string text = read_file(out.string());
  fs::remove(out);
  return text;
}

Outcome parser_files() {
  const std::string dir = FUNCINT_TEST_DATA;
  std::vector<std::string> problems;
  try {
    const Mesh line = read_msh_file(dir + "/line.msh");
    if (line.node_count() != 5 || line.elements().size() != 4 || line.spatial_dim() != 1)
      problems.push_back("line.msh counts");
    const Mesh sq = read_msh_file(dir + "/square.msh");
    if (sq.node_count() != 10 || sq.elements().size() != 10 || sq.boundary().size() != 8)
      problems.push_back("square.msh counts");
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  try {
    read_msh_file(dir + "/unsupported.msh");
    problems.push_back("unsupported.msh accepted");
  } catch (const ParseError& e) {
    if (e.code() != ErrorCode::UnsupportedElementType || e.line() != 14)
      problems.push_back("unsupported.msh wrong error");
  }

  int status = 0;
  for (const char* name : {"line", "square"}) {
    const std::string a = run_cli("mesh-info \"" + dir + "/" + name + ".msh\"", status);
    const int s1 = status;
    const std::string b = run_cli("mesh-info \"" + dir + "/" + name + ".msh\"", status);
    const std::string golden = read_file(dir + "/" + name + ".mesh-info.txt");
    if (s1 != 0 || status != 0 || a != b || a != golden)
      problems.push_back(std::string(name) + " mesh-info differs from golden output");
  }
  const std::string empty = run_cli("mesh-info \"" + dir + "/empty.msh\"", status);
  if (status == 0 || empty.find("missing $MeshFormat") == std::string::npos)
    problems.push_back("empty file not rejected with missing $MeshFormat");

  std::string detail = "3 sample files, mesh-info golden output";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "element matrices vs quadrature", 1.0, element_oracles},
      {2, "string nodal exactness", 1.0, string_nodal_exactness},
      {3, "cantilever benchmark", 1.0, beam_cantilever},
      {4, "L2 convergence order", 5.0, convergence_order},
      {5, "Gaussian identities", 1e9, gaussian_identities},
      {6, "MCMC vs analytic string", 30.0, mcmc_string},
      {7, "adhesion sampled vs exact", 30.0, adhesion_sampled},
      {8, "adhesion limits and shape", 10.0, adhesion_shape},
      {9, "membrane center value", 10.0, membrane_center},
      {10, "MSH parser and mesh-info", 1e9, parser_files},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", c.budget_s);
    }
    std::printf("criterion %2d %-32s %s  [%.2f s] %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                dt, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
