#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "acrel/diagnostics.hpp"
#include "acrel/geometry.hpp"
#include "acrel/grid.hpp"
#include "acrel/kernels.hpp"
#include "acrel/potential.hpp"

namespace acrel {

enum class Stepper { semi_implicit, explicit_euler };

struct GridSpec {
  GridMode mode = GridMode::full;
  // Ambient dimension: 1 or 2 for full grids, 2 or 3 for radial grids.
  int dim = 1;
  double L = 1.0;
  std::size_t n = 256;

  double h() const noexcept {
    return mode == GridMode::radial ? L / static_cast<double>(n - 1) : 2.0 * L / static_cast<double>(n);
  }
};

// Upper end of the admissible band for overshoot beyond the wells before a point counts as clamped.
inline constexpr double kClampDelta = 1e-10;
inline constexpr double kBlowUpBound = 2.0;
inline constexpr double kBoundaryTolerance = 1e-6;

struct SimulationConfig {
  double epsilon = 0.05;
  PotentialSpec potential = make_standard_potential();
  InterfaceTrajectory trajectory = InterfaceTrajectory::plane(1, unit_vector(0), 0.0, 1.0);
  CutoffSpec cutoff;
  GridSpec grid;
  Stepper stepper = Stepper::semi_implicit;
  double dt = 0.05 * 0.05 / 20.0;
  double t_end = 0.1;
  std::size_t cadence = 10;
  bool identity = false;
  std::vector<double> snapshot_times;
  double s0 = 0.0;  // 0 selects r_c/4
  double profile_s_max = 8.0;
  std::size_t profile_samples = 2049;
  kernels::Exec exec = kernels::Exec::parallel;

  double weight_scale() const noexcept { return s0 > 0.0 ? s0 : cutoff.r_c / 4.0; }
};

// r_c used when the configuration leaves it open: 0.45 min R(t) for spheres, 0.5 for planes.
double default_cutoff_radius(const InterfaceTrajectory& traj);
// Smallest R(T_max) the theory tolerates for a given epsilon and cutoff.
double extinction_guard(double epsilon, const CutoffSpec& cutoff);

// Every violated invariant, each prefixed with the configuration key path.
std::vector<std::string> validate(const SimulationConfig& cfg);
void require_valid(const SimulationConfig& cfg);

std::shared_ptr<const Grid> make_grid(const GridSpec& spec);

// u(x) = theta(dist(x, I(0)) / eps)
ScalarField initial_data(const SimulationConfig& cfg, std::shared_ptr<const Grid> grid, const ProfileTable& profile);
ScalarField initial_data(const SimulationConfig& cfg);

// Advances u in place with a fixed step. Semi-implicit steps solve (I - dt Lap_h) u+ = u - dt W'(u)/eps^2
// by a factored tridiagonal system (1-D, radial) or a cosine transform (2-D).
class AllenCahnSolver {
 public:
  AllenCahnSolver(const SimulationConfig& cfg, std::shared_ptr<const Grid> grid, double dt);
  ~AllenCahnSolver();
  AllenCahnSolver(const AllenCahnSolver&) = delete;
  AllenCahnSolver& operator=(const AllenCahnSolver&) = delete;

  void step(ScalarField& u);
  double dt() const noexcept { return dt_; }
  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  struct Transform;

  void solve_tridiagonal(std::span<double> x) const;

  const PotentialSpec& potential_;
  std::shared_ptr<const Grid> grid_;
  Stepper stepper_;
  double eps_;
  double dt_;
  kernels::Exec exec_;
  std::vector<double> rhs_;
  std::vector<double> lap_;
  // Factored tridiagonal system: sub-diagonal, modified super-diagonal and inverse pivots.
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
  std::unique_ptr<Transform> transform_;
  std::size_t steps_ = 0;
};

// One step of the configured scheme with the configured dt; convenience for tests.
ScalarField step(const SimulationConfig& cfg, const ScalarField& u);

struct RunRecord {
  double t = 0.0;
  std::size_t step = 0;
  std::shared_ptr<const ScalarField> snapshot;  // set at requested snapshot times
  EntropyBreakdown diagnostics;
};

struct RunOptions {
  bool keep_all_snapshots = false;
};

struct RunResult {
  std::vector<RunRecord> series;
  std::size_t steps = 0;
  double dt = 0.0;  // the step actually used, T_end / steps
  std::size_t clamp_events = 0;
  std::shared_ptr<const ScalarField> final_field;
};

// Number of steps and step size used to reach t_end exactly without exceeding cfg.dt.
std::size_t step_count(double t_end, double dt);

RunResult run(const SimulationConfig& cfg, const RunOptions& options = {});

}  // namespace acrel
