#include "acrel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "acrel/error.hpp"
#include "acrel/io.hpp"

namespace acrel {

LogLogFit fit_loglog(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points, got " + std::to_string(points.size()));
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [e, q] : points) {
    if (!(e > 0.0)) throw std::invalid_argument("rate fit: epsilon must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("rate fit: quantity must be positive, got " + std::to_string(q));
    sx += std::log(e);
    sy += std::log(q);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [e, q] : points) {
    const double dx = std::log(e) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(q) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("rate fit: epsilons must not all coincide");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r2 = 0.0;
  for (const auto& [e, q] : points) {
    const double r = std::log(q) - (f.intercept + f.slope * std::log(e));
    r2 += r * r;
  }
  f.residual_norm = std::sqrt(r2);
  return f;
}

double fit_rate(std::span<const std::pair<double, double>> points) { return fit_loglog(points).slope; }

double observed_order(std::span<const double> x, std::span<const double> y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) pts.emplace_back(x[i], y[i]);
  return fit_loglog(pts).slope;
}

GronwallFit gronwall_fit(std::span<const std::pair<double, double>> series, double floor) {
  GronwallFit g;
  if (series.empty()) {
    g.degenerate = true;
    return g;
  }
  const auto [t0, e0] = series.front();
  if (!(e0 > floor)) {
    g.degenerate = true;
    return g;
  }
  for (const auto& [t, e] : series) {
    const double dt = t - t0;
    if (dt <= 0.0 || !(e > 0.0)) continue;
    g.c_hat = std::max(g.c_hat, std::log(e / e0) / dt);
  }
  for (const auto& [t, e] : series) g.max_ratio = std::max(g.max_ratio, e / (e0 * std::exp(g.c_hat * (t - t0))));
  return g;
}

bool gronwall_stable(std::span<const double> constants, double factor) {
  if (constants.empty()) return true;
  const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
  if (*hi - *lo <= 1e-9) return true;
  return *lo > 0.0 && *hi / *lo <= factor;
}

std::vector<std::string> validate_plan(const SweepPlan& plan) {
  std::vector<std::string> v;
  const auto& eps = plan.settings.epsilons;
  if (eps.size() < 3) v.push_back("sweep.epsilons: needs at least 3 entries, got " + std::to_string(eps.size()));
  if (!eps.empty() && eps.front() < 4.0 * eps.back())
    v.push_back("sweep.epsilons: must span at least a factor of 4");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) {
      v.push_back("sweep.epsilons: must be strictly descending");
      break;
    }
  for (double e : eps) {
    for (auto& msg : validate(member_config(plan, e))) v.push_back("[eps=" + format_double(e) + "] " + msg);
  }
  return v;
}

SweepPlan make_sweep_plan(const ConfigDocument& doc) {
  if (!doc.sweep) throw ConfigError({"sweep: section missing"});
  SweepPlan plan{doc, *doc.sweep};
  auto v = validate_plan(plan);
  if (!v.empty()) throw ConfigError(std::move(v));
  return plan;
}

SimulationConfig member_config(const SweepPlan& plan, double epsilon) { return materialize(plan.document, epsilon); }

namespace {

void add_quantity(RateReport& r, const std::string& name, std::vector<double> values) {
  r.quantities.emplace_back(name, std::move(values));
}

void add_fit(RateReport& r, const std::string& name, const std::vector<double>& q) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < q.size(); ++i) pts.emplace_back(r.epsilons[i], q[i]);
  r.fits.emplace_back(name, fit_loglog(pts));
}

double sup_of(const std::vector<RunRecord>& s, double EntropyBreakdown::*field) {
  double m = -HUGE_VAL;
  for (const auto& rec : s) m = std::max(m, rec.diagnostics.*field);
  return m;
}

}  // namespace


RateReport initial_entropy_study(const SweepPlan& plan) {
  const auto& eps = plan.settings.epsilons;
  if (eps.size() < 3) throw std::invalid_argument("initial entropy study needs at least 3 epsilons, got " +
                                                  std::to_string(eps.size()));
  RateReport r;
  r.epsilons = eps;
  std::vector<double> e0(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    SimulationConfig cfg = member_config(plan, eps[i]);
    cfg.t_end = 0.0;
    require_valid(cfg);
    const ScalarField u = initial_data(cfg);
    const DiagnosticContext ctx{cfg.potential, cfg.epsilon, cfg.trajectory, cfg.cutoff, cfg.weight_scale(), cfg.exec};
    e0[i] = relative_entropy(u, ctx, 0.0).rel_entropy;
  }
  add_quantity(r, "initial_rel_entropy", e0);
  add_fit(r, "initial_entropy", e0);
  r.pass_flags.emplace_back("slope_initial_entropy", plan.settings.initial_entropy.contains(r.fits.back().second.slope));
  return r;
}

RateReport run_sweep(const SweepPlan& plan) {
  const auto& eps = plan.settings.epsilons;
  if (eps.empty()) throw std::invalid_argument("sweep needs a nonempty epsilon list");
  RateReport r;
  r.epsilons = eps;
  r.members.resize(eps.size());
  const auto count = static_cast<long long>(eps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    MemberResult& m = r.members[static_cast<std::size_t>(i)];
    m.epsilon = eps[static_cast<std::size_t>(i)];
    const auto start = std::chrono::steady_clock::now();
    try {
      m.config = member_config(plan, m.epsilon);
      RunResult run_result = run(m.config);
      m.series = std::move(run_result.series);
      m.dt = run_result.dt;
      m.steps = run_result.steps;
      m.clamp_events = run_result.clamp_events;
    } catch (const std::exception& e) {
      m.failed = true;
      m.error = "eps=" + format_double(m.epsilon) + ": " + e.what();
    }
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  std::vector<double> l1, ent, e0;
  bool any_failed = false;
  std::size_t violations = 0;
  bool bound_ok = true;
  for (auto& m : r.members) {
    if (m.failed) {
      any_failed = true;
      continue;
    }
    m.sup_err_l1 = sup_of(m.series, &EntropyBreakdown::err_L1);
    m.sup_rel_entropy = sup_of(m.series, &EntropyBreakdown::rel_entropy);
    m.initial_rel_entropy = m.series.front().diagnostics.rel_entropy;
    std::vector<std::pair<double, double>> te;
    for (const auto& rec : m.series) {
      te.emplace_back(rec.t, rec.diagnostics.rel_entropy);
      const auto rep = coercivity_check(rec.diagnostics, m.config.cutoff);
      for (std::size_t k = 0; k < 3; ++k) m.coercivity_violations += rep.items[k].ok ? 0 : 1;
      m.distance_flags += rep.distance_flagged ? 1 : 0;
    }
    m.gronwall = gronwall_fit(te);
    violations += m.coercivity_violations + m.distance_flags;
    if (m.gronwall.degenerate || m.gronwall.max_ratio > 1.05) bound_ok = false;
    l1.push_back(m.sup_err_l1);
    ent.push_back(m.sup_rel_entropy);
    e0.push_back(m.initial_rel_entropy);
    r.gronwall_constants.push_back(m.gronwall.c_hat);
  }
  if (any_failed) {
    r.pass_flags.emplace_back("all_members_completed", false);
    return r;
  }
  add_quantity(r, "sup_err_L1", l1);
  add_quantity(r, "sup_rel_entropy", ent);
  add_quantity(r, "initial_rel_entropy", e0);
  const auto& s = plan.settings;
  if (eps.size() >= 3) {
    add_fit(r, "err_L1", l1);
    add_fit(r, "rel_entropy", ent);
    add_fit(r, "initial_entropy", e0);
    r.pass_flags.emplace_back("slope_err_L1", s.err_l1.contains(r.fit("err_L1")->slope));
    r.pass_flags.emplace_back("slope_rel_entropy", s.rel_entropy.contains(r.fit("rel_entropy")->slope));
    r.pass_flags.emplace_back("slope_initial_entropy", s.initial_entropy.contains(r.fit("initial_entropy")->slope));
  }
  r.pass_flags.emplace_back("all_members_completed", true);
  r.pass_flags.emplace_back("gronwall_stable", gronwall_stable(r.gronwall_constants, s.gronwall_factor));
  r.pass_flags.emplace_back("gronwall_bound", bound_ok);
  r.pass_flags.emplace_back("coercivity", violations == 0);
  return r;
}

bool RateReport::all_pass() const {
  return std::all_of(pass_flags.begin(), pass_flags.end(), [](const auto& p) { return p.second; });
}

const LogLogFit* RateReport::fit(const std::string& name) const {
  for (const auto& [k, f] : fits)
    if (k == name) return &f;
  return nullptr;
}

nlohmann::json RateReport::to_json() const {
  nlohmann::json j;
  j["epsilons"] = epsilons;
  j["quantities"] = nlohmann::json::object();
  for (const auto& [k, v] : quantities) j["quantities"][k] = v;
  j["slopes"] = nlohmann::json::object();
  j["fits"] = nlohmann::json::object();
  for (const auto& [k, f] : fits) {
    j["slopes"][k] = f.slope;
    j["fits"][k] = {{"slope", f.slope}, {"intercept", f.intercept}, {"residual_norm", f.residual_norm}};
  }
  j["gronwall_constants"] = gronwall_constants;
  j["pass_flags"] = nlohmann::json::object();
  for (const auto& [k, v] : pass_flags) j["pass_flags"][k] = v;
  nlohmann::json members_json = nlohmann::json::array();
  for (const auto& m : members) {
    nlohmann::json mj = {{"epsilon", m.epsilon}, {"failed", m.failed}};
    if (m.failed) {
      mj["error"] = m.error;
    } else {
      mj["h"] = m.config.grid.h();
      mj["N"] = m.config.grid.n;
      mj["dt"] = m.dt;
      mj["steps"] = m.steps;
      mj["clamp_events"] = m.clamp_events;
      mj["gronwall_degenerate"] = m.gronwall.degenerate;
      mj["gronwall_max_ratio"] = m.gronwall.max_ratio;
      mj["coercivity_violations"] = m.coercivity_violations;
      mj["distance_control_flags"] = m.distance_flags;
    }
    members_json.push_back(mj);
  }
  j["members"] = members_json;
  return j;
}

std::vector<double> energy_dissipation_residuals(const std::vector<RunRecord>& s) {
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    const auto& d = s[j].diagnostics;
    const double rate = centered_derivative(s[j - 1].t, s[j - 1].diagnostics.gl_energy, s[j].t, d.gl_energy,
                                            s[j + 1].t, s[j + 1].diagnostics.gl_energy);
    out.push_back(std::abs(rate + d.dissipation) / std::max(d.dissipation, 1.0));
  }
  return out;
}

RefinementStudy identity_refinement(const SimulationConfig& base, std::size_t levels) {
  RefinementStudy study;
  SimulationConfig cfg = base;
  cfg.identity = true;
  for (std::size_t k = 0; k < levels; ++k) {
    if (k > 0) {
      cfg.grid.n = cfg.grid.mode == GridMode::radial ? 2 * (cfg.grid.n - 1) + 1 : 2 * cfg.grid.n;
      cfg.dt *= 0.5;
      cfg.cadence *= 2;
    }
    const RunResult r = run(cfg);
    RefinementLevel lv;
    lv.h = cfg.grid.h();
    lv.dt = r.dt;
    lv.steps = r.steps;
    for (const auto& rec : r.series)
      if (!std::isnan(rec.diagnostics.identity_residual))
        lv.identity_residual = std::max(lv.identity_residual, rec.diagnostics.identity_residual);
    for (double v : energy_dissipation_residuals(r.series)) lv.dissipation_residual = std::max(lv.dissipation_residual, v);
    study.levels.push_back(lv);
  }
  std::vector<double> h, id, dis;
  for (const auto& lv : study.levels) {
    h.push_back(lv.h);
    id.push_back(lv.identity_residual);
    dis.push_back(lv.dissipation_residual);
  }
  auto order = [&](const std::vector<double>& y) {
    for (double v : y)
      if (!(v > 0.0)) return 0.0;
    return levels >= 3 ? observed_order(h, y) : 0.0;
  };
  study.identity_order = order(id);
  study.dissipation_order = order(dis);
  return study;
}

nlohmann::json RefinementStudy::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels)
    lv.push_back({{"h", l.h},
                  {"dt", l.dt},
                  {"steps", l.steps},
                  {"identity_residual", l.identity_residual},
                  {"dissipation_residual", l.dissipation_residual}});
  return {{"levels", lv}, {"identity_order", identity_order}, {"dissipation_order", dissipation_order}};
}

}  // namespace acrel
