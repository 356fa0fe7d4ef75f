// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "acrel/diagnostics.hpp"
#include "acrel/grid.hpp"
#include "acrel/kernels.hpp"
#include "acrel/potential.hpp"
#include "acrel/solver.hpp"

using namespace acrel;

namespace {

struct Fixture {
  Grid grid;
  std::vector<double> u, out, gx, gy;

  explicit Fixture(std::size_t n) : grid(Grid::full(2, 1.0, n)), u(grid.size()), out(grid.size()), gx(grid.size()), gy(grid.size()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec3 x = grid.point(i);
      u[i] = std::tanh(1.5 * (0.5 - std::hypot(x[0], x[1])) / 0.05);
    }
  }
};

kernels::Exec exec_of(const benchmark::State& s) { return s.range(1) == 0 ? kernels::Exec::serial : kernels::Exec::parallel; }

void args(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024})
    for (long e : {0, 1}) b->Args({n, e});
  b->ArgNames({"N", "parallel"});
}

void BM_laplacian(benchmark::State& s) {
  Fixture f(static_cast<std::size_t>(s.range(0)));
  const auto e = exec_of(s);
  for (auto _ : s) {
    kernels::laplacian(e, f.grid, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(f.grid.size()));
}

void BM_gradient(benchmark::State& s) {
  Fixture f(static_cast<std::size_t>(s.range(0)));
  const auto e = exec_of(s);
  for (auto _ : s) {
    kernels::gradient(e, f.grid, f.u, f.gx, f.gy);
    benchmark::DoNotOptimize(f.gx.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(f.grid.size()));
}

void BM_reaction(benchmark::State& s) {
  Fixture f(static_cast<std::size_t>(s.range(0)));
  const PotentialSpec p = make_standard_potential();
  for (auto _ : s) {
    if (s.range(1) == 0)
      kernels::serial::reaction(p, 1e-3, f.u, f.out);
    else
      kernels::parallel::reaction(p, 1e-3, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(f.grid.size()));
}

void BM_weighted_sum(benchmark::State& s) {
  Fixture f(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) {
    const double v = s.range(1) == 0 ? kernels::serial::weighted_sum(f.grid.weights(), f.u)
                                     : kernels::parallel::weighted_sum(f.grid.weights(), f.u);
    benchmark::DoNotOptimize(v);
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(f.grid.size()));
}

SimulationConfig circle_config(std::size_t n, kernels::Exec e) {
  SimulationConfig cfg;
  cfg.epsilon = 8.0 / static_cast<double>(n);
  cfg.trajectory = InterfaceTrajectory::sphere(2, Vec3{}, 0.5, 0.01);
  cfg.cutoff.r_c = 0.2;
  cfg.grid = GridSpec{GridMode::full, 2, 1.0, n};
  cfg.dt = cfg.epsilon * cfg.epsilon / 20.0;
  cfg.exec = e;
  return cfg;
}

void BM_semi_implicit_step(benchmark::State& s) {
  const SimulationConfig cfg = circle_config(static_cast<std::size_t>(s.range(0)), exec_of(s));
  ScalarField u(make_grid(cfg.grid));
  Fixture f(cfg.grid.n);
  u.values = f.u;
  AllenCahnSolver solver(cfg, u.grid, cfg.dt);
  for (auto _ : s) solver.step(u);
  s.SetItemsProcessed(s.iterations() * static_cast<long>(u.size()));
}

void BM_relative_entropy(benchmark::State& s) {
  const SimulationConfig cfg = circle_config(static_cast<std::size_t>(s.range(0)), exec_of(s));
  ScalarField u(make_grid(cfg.grid));
  Fixture f(cfg.grid.n);
  u.values = f.u;
  const DiagnosticContext ctx{cfg.potential, cfg.epsilon, cfg.trajectory, cfg.cutoff, cfg.weight_scale(), cfg.exec};
  for (auto _ : s) benchmark::DoNotOptimize(relative_entropy(u, ctx, 0.0, true));
  s.SetItemsProcessed(s.iterations() * static_cast<long>(u.size()));
}

}  // namespace

BENCHMARK(BM_laplacian)->Apply(args);
BENCHMARK(BM_gradient)->Apply(args);
BENCHMARK(BM_reaction)->Apply(args);
BENCHMARK(BM_weighted_sum)->Apply(args);
BENCHMARK(BM_semi_implicit_step)->Apply(args);
BENCHMARK(BM_relative_entropy)->Apply(args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
