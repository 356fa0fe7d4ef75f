#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "acrel/error.hpp"
#include "acrel/solver.hpp"

using namespace acrel;

namespace {

SimulationConfig plane_config(double eps, std::size_t n) {
  SimulationConfig cfg;
  cfg.epsilon = eps;
  cfg.trajectory = InterfaceTrajectory::plane(1, unit_vector(0), 0.0, 1.0);
  cfg.cutoff.r_c = 0.5;
  cfg.grid = GridSpec{GridMode::full, 1, 1.0, n};
  cfg.dt = eps * eps / 20.0;
  cfg.t_end = 0.1;
  cfg.cadence = 50;
  return cfg;
}

SimulationConfig circle_config(double eps) {
  SimulationConfig cfg;
  cfg.epsilon = eps;
  cfg.trajectory = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.2);
  cfg.cutoff.r_c = 0.45 * cfg.trajectory.min_radius();
  cfg.cutoff.c_quad = 3.0;
  cfg.grid = GridSpec{GridMode::radial, 2, 2.0, static_cast<std::size_t>(std::lround(2.0 / (eps / 8.0))) + 1};
  cfg.dt = 0.125 * eps * eps * eps;
  cfg.t_end = 0.1;
  cfg.cadence = 1000;
  return cfg;
}

bool mentions(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

// sup |u(T) - u(0)| for the steady planar profile
double steady_drift(std::size_t n) {
  SimulationConfig cfg = plane_config(0.05, n);
  ScalarField u = initial_data(cfg);
  const ScalarField u0 = u;
  AllenCahnSolver solver(cfg, u.grid, cfg.dt);
  for (std::size_t k = 0; k < step_count(cfg.t_end, cfg.dt); ++k) solver.step(u);
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u.values[i] - u0.values[i]));
  return m;
}

// Outermost zero crossing of a radial field by linear interpolation.
double front_radius(const ScalarField& u) {
  const Grid& g = *u.grid;
  for (std::size_t i = g.size() - 1; i > 0; --i)
    if (u.values[i - 1] > 0.0 && u.values[i] <= 0.0) {
      const double a = u.values[i - 1], b = u.values[i];
      return g.coordinate(i - 1) + g.h() * a / (a - b);
    }
  return 0.0;
}

}  // namespace

TEST_CASE("pure phases are steady states") {
  for (double c : {1.0, -1.0}) {
    for (auto mode : {GridMode::full, GridMode::radial}) {
      SimulationConfig cfg = mode == GridMode::full ? plane_config(0.05, 160) : circle_config(0.08);
      auto grid = make_grid(cfg.grid);
      ScalarField u(grid, c);
      AllenCahnSolver solver(cfg, grid, cfg.dt);
      for (int k = 0; k < 50; ++k) solver.step(u);
      for (double x : u.values) CHECK(x == doctest::Approx(c).epsilon(1e-14));
    }
  }
  SimulationConfig cfg = plane_config(0.05, 160);
  cfg.grid = GridSpec{GridMode::full, 2, 1.0, 160};
  cfg.trajectory = InterfaceTrajectory::plane(2, unit_vector(0), 0.0, 1.0);
  auto grid = make_grid(cfg.grid);
  ScalarField u(grid, 1.0);
  AllenCahnSolver solver(cfg, grid, cfg.dt);
  for (int k = 0; k < 20; ++k) solver.step(u);
  CHECK(*std::min_element(u.values.begin(), u.values.end()) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("validation reports key paths") {
  SimulationConfig cfg = plane_config(0.05, 40);  // h = eps
  auto v = validate(cfg);
  CHECK(mentions(v, "grid.N: layer resolution rule violated"));

  cfg = plane_config(0.05, 80);  // h = eps / 2
  CHECK(mentions(validate(cfg), "grid.N: layer resolution rule violated"));
  cfg = plane_config(0.05, 160);  // h = eps / 4
  CHECK(validate(cfg).empty());

  cfg.dt = 1.0;
  CHECK(mentions(validate(cfg), "stepper.dt"));
  cfg = plane_config(0.05, 160);
  cfg.stepper = Stepper::explicit_euler;
  CHECK(mentions(validate(cfg), "stepper.dt: explicit stability bound"));
  cfg.dt = cfg.grid.h() * cfg.grid.h() / 2.0;
  CHECK(validate(cfg).empty());

  cfg = plane_config(0.05, 160);
  cfg.grid.L = 0.2;
  cfg.grid.n = 64;
  CHECK(mentions(validate(cfg), "grid.L: box too small"));

  cfg = circle_config(0.08);
  cfg.cutoff.c_quad = 4.0;
  CHECK(mentions(validate(cfg), "cutoff.c_quad"));
  cfg = circle_config(0.08);
  cfg.trajectory = InterfaceTrajectory::sphere(2, Vec3{}, 1.0, 0.49);
  CHECK(mentions(validate(cfg), "trajectory.T_max: extinction guard"));
  cfg = circle_config(0.08);
  cfg.t_end = 0.3;
  CHECK(mentions(validate(cfg), "stepper.T_end"));
  cfg = circle_config(0.08);
  cfg.snapshot_times = {0.5};
  CHECK(mentions(validate(cfg), "diagnostics.snapshot_times"));

  cfg = plane_config(0.05, 40);
  try {
    require_valid(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(!e.violations().empty());
  }
}

TEST_CASE("initial data is the optimal profile of the distance") {
  SimulationConfig cfg = circle_config(0.08);
  const ScalarField u = initial_data(cfg);
  const Grid& g = *u.grid;
  const auto profile = solve_profile(cfg.potential);
  for (std::size_t i = 0; i < g.size(); i += 37) {
    const double d = 1.0 - g.coordinate(i);
    CHECK(u.values[i] == doctest::Approx(std::tanh(1.5 * d / cfg.epsilon)).epsilon(1e-7).scale(1.0));
    CHECK(u.values[i] == doctest::Approx(profile.value(d / cfg.epsilon)).epsilon(1e-14).scale(1.0));
  }
  CHECK(front_radius(u) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("step count reaches T_end exactly") {
  CHECK(step_count(0.1, 0.01) == 10);
  CHECK(step_count(0.1, 0.03) == 4);
  CHECK(step_count(0.0, 0.01) == 0);
  CHECK(step_count(1.0, 0.3) == 4);
}

TEST_CASE("run bookkeeping") {
  SimulationConfig cfg = plane_config(0.05, 160);
  cfg.t_end = 0.01;  // 80 steps
  cfg.cadence = 30;
  cfg.snapshot_times = {0.0, 0.005, 0.01};
  const RunResult r = run(cfg);
  CHECK(r.steps == 80);
  CHECK(r.dt == doctest::Approx(1.25e-4));
  REQUIRE(r.series.size() == 4);  // steps 0, 30, 60, 80
  CHECK(r.series.front().t == 0.0);
  CHECK(r.series.back().step == 80);
  CHECK(r.series.back().t == doctest::Approx(0.01));
  std::size_t snaps = 0;
  for (const auto& rec : r.series) snaps += rec.snapshot ? 1 : 0;
  CHECK(snaps >= 2);
  REQUIRE(r.final_field);
  CHECK(r.clamp_events == 0);

  cfg.t_end = 0.0;
  cfg.snapshot_times = {0.0};
  const RunResult z = run(cfg);
  CHECK(z.steps == 0);
  REQUIRE(z.series.size() == 1);
  CHECK(z.series[0].snapshot != nullptr);
}

TEST_CASE("planar profile drifts at second order in h") {
  const double coarse = steady_drift(160);
  const double fine = steady_drift(320);
  CHECK(coarse < 0.05);
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("planar relative entropy stays at its initial level") {
  SimulationConfig cfg = plane_config(0.05, 320);
  const RunResult r = run(cfg);
  const double e0 = r.series.front().diagnostics.rel_entropy;
  for (const auto& rec : r.series) {
    CHECK(rec.diagnostics.rel_entropy <= 2.0 * e0);
    CHECK(rec.diagnostics.rel_entropy >= 0.5 * e0);
  }
}

TEST_CASE("circle shrinks by mean curvature flow") {
  SimulationConfig cfg = circle_config(0.04);
  const RunResult r = run(cfg);
  const double R = front_radius(*r.final_field);
  CHECK(std::abs(R - std::sqrt(0.8)) <= 5.0 * cfg.epsilon);
  CHECK(std::abs(R - std::sqrt(0.8)) <= 1.0 * cfg.epsilon);
}

TEST_CASE("blow-up is reported with step and time") {
  SimulationConfig cfg = plane_config(0.05, 160);
  cfg.stepper = Stepper::explicit_euler;
  cfg.dt = 1e-3;  // far beyond h^2/2
  auto grid = make_grid(cfg.grid);
  ScalarField u = initial_data(plane_config(0.05, 160));
  AllenCahnSolver solver(cfg, grid, cfg.dt);
  bool thrown = false;
  try {
    for (int k = 0; k < 10000; ++k) solver.step(u);
  } catch (const SolverError& e) {
    thrown = true;
    CHECK(e.step() > 0);
    CHECK(e.time() > 0.0);
  }
  CHECK(thrown);
}

TEST_CASE("semi-implicit and explicit schemes agree at small dt") {
  SimulationConfig cfg = plane_config(0.05, 160);
  cfg.trajectory = InterfaceTrajectory::plane(1, unit_vector(0), 0.1, 1.0);
  ScalarField a = initial_data(cfg);
  a.values[80] += 0.3;  // perturbation
  ScalarField b = a;
  cfg.dt = 2e-5;
  AllenCahnSolver s1(cfg, a.grid, cfg.dt);
  cfg.stepper = Stepper::explicit_euler;
  AllenCahnSolver s2(cfg, b.grid, cfg.dt);
  for (int k = 0; k < 200; ++k) {
    s1.step(a);
    s2.step(b);
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  CHECK(m < 5e-3);
}
