// Serial reference vs OpenMP kernels: parameter sweeps and multi-chain MCMC.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <omp.h>

#include "funcint/models.hpp"
#include "funcint/sampler.hpp"
#include "funcint/sweep.hpp"

using namespace funcint;

namespace {

template <class F>
double seconds(F&& f, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %9.4f s   openmp %9.4f s   speedup %5.2fx   %s\n", name, serial,
              parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool ok = true;

  {
    AdhesionParams p;
    std::vector<double> u;
    for (int i = 0; i <= 300; ++i) u.push_back(3.0 * i / 300.0);
    const std::vector<double> betas = {15, 10, 6, 4, 3, 2, 1};
    Table a, b;
    const double ts = seconds([&] { a = sweep_serial(p, SweepVariable::UBar, u, betas); }, repeats);
    const double tp = seconds([&] { b = sweep(p, SweepVariable::UBar, u, betas); }, repeats);
    ok &= a.rows == b.rows;
    report("adhesion u_bar sweep", ts, tp, a.rows == b.rows);
  }
  {
    const Mesh m = build_uniform_interval_mesh(1.0, 200);
    const ModelSystem s = build_string({1.0, 1.0, Load{1.0}, 0.0, 0.0}, m);
    std::vector<double> betas;
    for (int i = 1; i <= 64; ++i) betas.push_back(0.1 * i);
    Table a, b;
    const double ts = seconds([&] { a = sweep_serial(s, SweepVariable::Beta, betas); }, repeats);
    const double tp = seconds([&] { b = sweep(s, SweepVariable::Beta, betas); }, repeats);
    ok &= a.rows == b.rows;
    report("string beta sweep (N=199)", ts, tp, a.rows == b.rows);
  }
  {
    const Mesh m = build_uniform_interval_mesh(1.0, 50);
    const ModelSystem s = build_string({1.0, 1.0, Load{1.0}, 0.0, 0.0}, m);
    const QuadraticForm& form = s.form;
    auto factory = [&form] { return std::make_unique<QuadraticEnergy>(form); };
    const std::vector<double> init(form.n(), 0.0);
    auto obs = [](std::span<const double> d) { return std::vector<double>(d.begin(), d.end()); };
    const ChainConfig cfg{20000, 2000, 0.15, 42, 10};
    Estimate a, b;
    const double ts =
        seconds([&] { a = run_chains_serial(factory, 1.0, init, obs, cfg, 8); }, repeats);
    const double tp = seconds([&] { b = run_chains(factory, 1.0, init, obs, cfg, 8); }, repeats);
    const bool same = a.value == b.value && a.std_error == b.std_error;
    ok &= same;
    report("8 Metropolis chains (N=49)", ts, tp, same);
  }
  return ok ? 0 : 1;
}
