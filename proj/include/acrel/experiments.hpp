#pragma once

#include <json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acrel/config.hpp"
#include "acrel/solver.hpp"

namespace acrel {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;  // l2 norm of log q - (intercept + slope log eps)
};

// Least squares on (log eps, log q); needs at least three points and q > 0.
LogLogFit fit_loglog(std::span<const std::pair<double, double>> points);
double fit_rate(std::span<const std::pair<double, double>> points);

struct GronwallFit {
  double c_hat = 0.0;
  bool degenerate = false;  // E(0) at or below the quadrature floor
  // max over samples of E(t) / (E(0) exp(c_hat t)); 1 when the bound is attained.
  double max_ratio = 0.0;
};

// Smallest C >= 0 with E(t) <= E(0) exp(C t) on every sample.
GronwallFit gronwall_fit(std::span<const std::pair<double, double>> series, double floor = kQuadratureFloor);

// max(c) / min(c) <= factor, with values agreeing to 1e-9 treated as equal (including all zero).
bool gronwall_stable(std::span<const double> constants, double factor);

struct SweepPlan {
  ConfigDocument document;
  SweepSettings settings;
};

// Requires a sweep section with at least three epsilons spanning a factor of at least four.
SweepPlan make_sweep_plan(const ConfigDocument& doc);
std::vector<std::string> validate_plan(const SweepPlan& plan);
SimulationConfig member_config(const SweepPlan& plan, double epsilon);

struct MemberResult {
  double epsilon = 0.0;
  bool failed = false;
  std::string error;
  SimulationConfig config;
  std::vector<RunRecord> series;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t clamp_events = 0;
  double sup_err_l1 = 0.0;
  double sup_rel_entropy = 0.0;
  double initial_rel_entropy = 0.0;
  GronwallFit gronwall;
  std::size_t coercivity_violations = 0;
  std::size_t distance_flags = 0;
  double seconds = 0.0;
};

struct RateReport {
  std::vector<double> epsilons;
  std::vector<std::pair<std::string, std::vector<double>>> quantities;
  std::vector<std::pair<std::string, LogLogFit>> fits;
  std::vector<double> gronwall_constants;
  std::vector<std::pair<std::string, bool>> pass_flags;
  std::vector<MemberResult> members;

  bool all_pass() const;
  const LogLogFit* fit(const std::string& name) const;
  nlohmann::json to_json() const;
};

// E[u_eps|I](0) per epsilon, no time stepping.
RateReport initial_entropy_study(const SweepPlan& plan);

// Runs every member (concurrently), collects sup_t err_L1 and sup_t E[u|I], fits both rates and
// the per-member Gronwall constants, and checks the configured bands.
RateReport run_sweep(const SweepPlan& plan);

// |dE/dt + D| / max(D, 1) at every interior diagnostic time, dE/dt by centred differences.
std::vector<double> energy_dissipation_residuals(const std::vector<RunRecord>& series);

struct RefinementLevel {
  double h = 0.0;
  double dt = 0.0;
  double identity_residual = 0.0;     // sup over interior diagnostic times
  double dissipation_residual = 0.0;  // sup of the relative energy-dissipation residual
  std::size_t steps = 0;
};

struct RefinementStudy {
  std::vector<RefinementLevel> levels;
  double identity_order = 0.0;     // least-squares slope of log residual against log h
  double dissipation_order = 0.0;

  nlohmann::json to_json() const;
};

// Runs cfg at `levels` joint refinements: h and dt halve together, diagnostic interval fixed in time.
RefinementStudy identity_refinement(const SimulationConfig& cfg, std::size_t levels = 3);

// Slope of log y against log x by least squares (no positivity requirement beyond y > 0).
double observed_order(std::span<const double> x, std::span<const double> y);

}  // namespace acrel
