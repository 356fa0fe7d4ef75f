#include "acrel/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "acrel/error.hpp"

namespace acrel {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs(kernels::Exec e, std::span<const double> u) {
  return e == kernels::Exec::serial ? kernels::serial::max_abs(u) : kernels::parallel::max_abs(u);
}

std::size_t count_outside(kernels::Exec e, std::span<const double> u, double bound) {
  return e == kernels::Exec::serial ? kernels::serial::count_outside(u, bound)
                                    : kernels::parallel::count_outside(u, bound);
}

// Smallest |dist(x, I(0))| over the outermost grid points.
double boundary_distance(const SimulationConfig& cfg) {
  const auto grid = make_grid(cfg.grid);
  const std::size_t n = grid->n();
  double best = HUGE_VAL;
  auto visit = [&](std::size_t idx) {
    best = std::min(best, std::abs(cfg.trajectory.signed_distance(grid->point(idx), 0.0)));
  };
  if (grid->is_radial()) {
    visit(n - 1);
  } else if (grid->dim() == 1) {
    visit(0);
    visit(n - 1);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      visit(i);
      visit((n - 1) * n + i);
      visit(i * n);
      visit(i * n + n - 1);
    }
  }
  return best;
}

}  // namespace

double default_cutoff_radius(const InterfaceTrajectory& traj) {
  return traj.is_sphere() ? 0.45 * traj.min_radius() : 0.5;
}

double extinction_guard(double epsilon, const CutoffSpec& cutoff) {
  return std::max(2.0 * cutoff.r_c, 4.0 * epsilon);
}

std::vector<std::string> validate(const SimulationConfig& cfg) {
  std::vector<std::string> v;
  auto add = [&](const std::string& key, const std::string& msg) { v.push_back(key + ": " + msg); };

  const double eps = cfg.epsilon;
  if (!(eps > 0.0)) add("epsilon", "must be positive, got " + fmt(eps));

  const GridSpec& g = cfg.grid;
  bool grid_ok = true;
  if (g.mode == GridMode::full) {
    if (g.dim != 1 && g.dim != 2) {
      add("grid.dimension", "full grids support dimension 1 or 2, got " + std::to_string(g.dim));
      grid_ok = false;
    }
  } else if (g.dim != 2 && g.dim != 3) {
    add("grid.dimension", "radial grids support dimension 2 or 3, got " + std::to_string(g.dim));
    grid_ok = false;
  }
  if (!(g.L > 0.0)) {
    add("grid.L", "must be positive, got " + fmt(g.L));
    grid_ok = false;
  }
  if (g.n < 8) {
    add("grid.N", "needs at least 8 points per axis, got " + std::to_string(g.n));
    grid_ok = false;
  }
  const double h = grid_ok ? g.h() : 0.0;
  if (grid_ok && eps > 0.0 && h > eps / 4.0 * (1.0 + 1e-12))
    add("grid.N", "layer resolution rule violated: h = " + fmt(h) + " exceeds epsilon/4 = " + fmt(eps / 4.0));

  const InterfaceTrajectory& traj = cfg.trajectory;
  if (grid_ok && traj.dim() != g.dim)
    add("trajectory.d", "trajectory dimension " + std::to_string(traj.dim()) + " differs from grid.dimension " +
                            std::to_string(g.dim));
  if (g.mode == GridMode::radial) {
    const auto* s = traj.as_sphere();
    if (s == nullptr)
      add("grid.mode", "radial grids require a sphere trajectory");
    else if (norm(s->center) != 0.0)
      add("trajectory.center", "radial grids require the sphere to be centred at the origin");
  }

  const double max_dt_stiff = eps * eps / (2.0 * cfg.potential.max_ddW_on_unit_interval());
  if (!(cfg.dt > 0.0)) {
    add("stepper.dt", "must be positive, got " + fmt(cfg.dt));
  } else {
    if (eps > 0.0 && cfg.dt > max_dt_stiff * (1.0 + 1e-12))
      add("stepper.dt", "stiffness bound violated: dt = " + fmt(cfg.dt) + " exceeds eps^2/(2 max W'') = " +
                            fmt(max_dt_stiff));
    if (cfg.stepper == Stepper::explicit_euler && grid_ok) {
      const double cfl = h * h / (2.0 * g.dim);
      if (cfg.dt > cfl * (1.0 + 1e-12))
        add("stepper.dt", "explicit stability bound violated: dt = " + fmt(cfg.dt) + " exceeds h^2/(2d) = " + fmt(cfl));
    }
  }
  if (!(cfg.t_end >= 0.0)) add("stepper.T_end", "must be nonnegative, got " + fmt(cfg.t_end));
  if (cfg.t_end > traj.t_max() * (1.0 + 1e-12))
    add("stepper.T_end", "exceeds the trajectory horizon T_max = " + fmt(traj.t_max()));
  if (cfg.cadence < 1) add("diagnostics.cadence", "must be at least 1");
  for (double ts : cfg.snapshot_times)
    if (ts < 0.0 || ts > cfg.t_end * (1.0 + 1e-12))
      add("diagnostics.snapshot_times", "time " + fmt(ts) + " lies outside [0, T_end]");
  if (cfg.s0 < 0.0) add("diagnostics.s0", "must be nonnegative (0 selects r_c/4), got " + fmt(cfg.s0));

  const CutoffSpec& c = cfg.cutoff;
  if (!(c.r_c > 0.0)) add("cutoff.r_c", "must be positive, got " + fmt(c.r_c));
  if (!(c.c_quad > 0.0 && c.c_quad < 4.0)) add("cutoff.c_quad", "must lie in (0, 4), got " + fmt(c.c_quad));
  if (traj.is_sphere()) {
    const double rmin = traj.min_radius();
    if (c.r_c >= rmin)
      add("cutoff.r_c", "must stay below the injectivity radius min R(t) = " + fmt(rmin) + ", got " + fmt(c.r_c));
    const double guard = extinction_guard(eps, c);
    if (rmin < guard)
      add("trajectory.T_max", "extinction guard violated: R(T_max) = " + fmt(rmin) + " < max(2 r_c, 4 eps) = " +
                                  fmt(guard));
  }

  if (cfg.profile_s_max < 5.0) add("profile.s_max", "must be at least 5");
  if (cfg.profile_samples < 64) add("profile.samples", "must be at least 64");

  if (v.empty() && grid_ok) {
    const ProfileTable profile = solve_profile(cfg.potential, cfg.profile_s_max, cfg.profile_samples);
    const double d = boundary_distance(cfg);
    const double u = profile.value(d / eps);
    if (u < 1.0 - kBoundaryTolerance)
      add("grid.L", "box too small: boundary value |u| = " + fmt(u) + " at distance " + fmt(d) +
                        " from the interface is below 1 - 1e-6");
  }
  return v;
}

void require_valid(const SimulationConfig& cfg) {
  auto v = validate(cfg);
  if (!v.empty()) throw ConfigError(std::move(v));
}

std::shared_ptr<const Grid> make_grid(const GridSpec& spec) {
  if (spec.mode == GridMode::radial) return std::make_shared<const Grid>(Grid::radial(spec.dim, spec.L, spec.n));
  return std::make_shared<const Grid>(Grid::full(spec.dim, spec.L, spec.n));
}

ScalarField initial_data(const SimulationConfig& cfg, std::shared_ptr<const Grid> grid, const ProfileTable& profile) {
  ScalarField u(std::move(grid));
  const Grid& g = *u.grid;
  const double inv_eps = 1.0 / cfg.epsilon;
  const auto size = static_cast<long long>(g.size());
  const bool par = cfg.exec == kernels::Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (long long i = 0; i < size; ++i) {
    const auto k = static_cast<std::size_t>(i);
    u.values[k] = profile.value(cfg.trajectory.signed_distance(g.point(k), 0.0) * inv_eps);
  }
  return u;
}

ScalarField initial_data(const SimulationConfig& cfg) {
  require_valid(cfg);
  return initial_data(cfg, make_grid(cfg.grid), solve_profile(cfg.potential, cfg.profile_s_max, cfg.profile_samples));
}

struct AllenCahnSolver::Transform {
  std::size_t n = 0;
  double* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> inv_symbol;  // 1 / (1 + dt lambda_k) / (2N)^2

  Transform(std::size_t n_, double h, double dt) : n(n_), inv_symbol(n_ * n_) {
    const int ni = static_cast<int>(n);
    {
      std::lock_guard lock(fftw_planner_mutex());
      buffer = fftw_alloc_real(n * n);
      forward = fftw_plan_r2r_2d(ni, ni, buffer, buffer, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
      backward = fftw_plan_r2r_2d(ni, ni, buffer, buffer, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
    std::vector<double> lambda(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = std::sin(std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n)));
      lambda[k] = 4.0 * s * s / (h * h);
    }
    const double norm2 = 4.0 * static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t ky = 0; ky < n; ++ky)
      for (std::size_t kx = 0; kx < n; ++kx)
        inv_symbol[ky * n + kx] = 1.0 / ((1.0 + dt * (lambda[ky] + lambda[kx])) * norm2);
  }
  ~Transform() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  void solve(std::span<double> x) {
    std::copy(x.begin(), x.end(), buffer);
    fftw_execute(forward);
    for (std::size_t i = 0; i < n * n; ++i) buffer[i] *= inv_symbol[i];
    fftw_execute(backward);
    std::copy(buffer, buffer + n * n, x.begin());
  }
};

AllenCahnSolver::AllenCahnSolver(const SimulationConfig& cfg, std::shared_ptr<const Grid> grid, double dt)
    : potential_(cfg.potential),
      grid_(std::move(grid)),
      stepper_(cfg.stepper),
      eps_(cfg.epsilon),
      dt_(dt),
      exec_(cfg.exec),
      rhs_(grid_->size()),
      lap_(grid_->size()) {
  if (stepper_ != Stepper::semi_implicit) return;
  const Grid& g = *grid_;
  const std::size_t n = g.n();
  if (!g.is_radial() && g.dim() == 2) {
    transform_ = std::make_unique<Transform>(n, g.h(), dt_);
    return;
  }
  // Rows a_i x_{i-1} + b_i x_i + c_i x_{i+1} of I - dt Lap_h.
  std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0);
  const double h = g.h();
  if (g.is_radial()) {
    const auto faces = g.face_areas();
    const auto vol = g.weights();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = dt_ / (h * vol[i]);
      if (i > 0) a[i] = -s * faces[i - 1];
      if (i + 1 < n) c[i] = -s * faces[i];
      b[i] = 1.0 - a[i] - c[i];
    }
  } else {
    const double r = dt_ / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) a[i] = -r;
      if (i + 1 < n) c[i] = -r;
      b[i] = 1.0 - a[i] - c[i];
    }
  }
  lower_ = a;
  upper_.assign(n, 0.0);
  inv_pivot_.assign(n, 0.0);
  inv_pivot_[0] = 1.0 / b[0];
  upper_[0] = c[0] * inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    inv_pivot_[i] = 1.0 / (b[i] - a[i] * upper_[i - 1]);
    upper_[i] = c[i] * inv_pivot_[i];
  }
}

AllenCahnSolver::~AllenCahnSolver() = default;

void AllenCahnSolver::solve_tridiagonal(std::span<double> x) const {
  const std::size_t n = x.size();
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
}

void AllenCahnSolver::step(ScalarField& u) {
  const Grid& g = *grid_;
  std::span<double> values(u.values);
  if (stepper_ == Stepper::explicit_euler) {
    kernels::laplacian(exec_, g, values, lap_);
    if (exec_ == kernels::Exec::serial)
      kernels::serial::explicit_update(potential_, dt_, eps_, values, lap_, rhs_);
    else
      kernels::parallel::explicit_update(potential_, dt_, eps_, values, lap_, rhs_);
    std::copy(rhs_.begin(), rhs_.end(), values.begin());
  } else {
    const double a = dt_ / (eps_ * eps_);
    if (exec_ == kernels::Exec::serial)
      kernels::serial::reaction(potential_, a, values, rhs_);
    else
      kernels::parallel::reaction(potential_, a, values, rhs_);
    if (transform_)
      transform_->solve(rhs_);
    else
      solve_tridiagonal(rhs_);
    std::copy(rhs_.begin(), rhs_.end(), values.begin());
  }
  ++steps_;
  const double m = max_abs(exec_, values);
  if (!(m <= kBlowUpBound))
    throw SolverError("blow-up: max|u| = " + fmt(m) + " exceeds " + fmt(kBlowUpBound), steps_,
                      static_cast<double>(steps_) * dt_);
  u.clamp_count += count_outside(exec_, values, 1.0 + kClampDelta);
}

ScalarField step(const SimulationConfig& cfg, const ScalarField& u) {
  AllenCahnSolver solver(cfg, u.grid, cfg.dt);
  ScalarField next = u;
  solver.step(next);
  return next;
}

std::size_t step_count(double t_end, double dt) {
  if (!(t_end > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

RunResult run(const SimulationConfig& cfg, const RunOptions& options) {
  require_valid(cfg);
  auto grid = make_grid(cfg.grid);
  const ProfileTable profile = solve_profile(cfg.potential, cfg.profile_s_max, cfg.profile_samples);
  ScalarField u = initial_data(cfg, grid, profile);

  RunResult result;
  result.steps = step_count(cfg.t_end, cfg.dt);
  result.dt = result.steps > 0 ? cfg.t_end / static_cast<double>(result.steps) : cfg.dt;
  AllenCahnSolver solver(cfg, grid, result.dt);
  const DiagnosticContext ctx{cfg.potential, cfg.epsilon, cfg.trajectory, cfg.cutoff, cfg.weight_scale(), cfg.exec};

  std::vector<double> pending = cfg.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;
  const double time_tol = 1e-9 * std::max(1.0, cfg.t_end);

  auto record = [&](std::size_t k) {
    const double t = k == result.steps ? cfg.t_end : static_cast<double>(k) * result.dt;
    RunRecord r;
    r.t = t;
    r.step = k;
    r.diagnostics = relative_entropy(u, ctx, t, cfg.identity);
    r.diagnostics.clamped = u.clamp_count;
    bool keep = options.keep_all_snapshots;
    while (next_snapshot < pending.size() && t >= pending[next_snapshot] - time_tol) {
      keep = true;
      ++next_snapshot;
    }
    if (keep) r.snapshot = std::make_shared<const ScalarField>(u);
    result.series.push_back(std::move(r));
  };

  record(0);
  for (std::size_t k = 1; k <= result.steps; ++k) {
    solver.step(u);
    if (k % cfg.cadence == 0 || k == result.steps) record(k);
  }

  auto& s = result.series;
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    auto& d = s[j].diagnostics;
    d.rel_entropy_rate = centered_derivative(s[j - 1].t, s[j - 1].diagnostics.rel_entropy, s[j].t, d.rel_entropy,
                                             s[j + 1].t, s[j + 1].diagnostics.rel_entropy);
    if (cfg.identity) d.identity_residual = std::abs(d.rel_entropy_rate - d.identity_rhs);
  }
  result.clamp_events = u.clamp_count;
  result.final_field = std::make_shared<const ScalarField>(std::move(u));
  return result;
}

}  // namespace acrel
