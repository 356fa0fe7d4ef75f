#include "acrel/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "acrel/error.hpp"

namespace acrel {

namespace {

using nlohmann::json;

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  // Returns the object at key, or an empty object when absent; reports non-objects.
  json section(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key) || parent.at(key).is_null()) return json::object();
    if (!parent.at(key).is_object()) {
      fail(path, "expected an object");
      return json::object();
    }
    return parent.at(key);
  }

  void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!allowed.contains(k)) fail(join(path, k), "unknown key");
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      fail(join(path, key), "must be finite");
      return std::nullopt;
    }
    return d;
  }

  double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return number(obj, key, path).value_or(fallback);
  }

  std::optional<std::size_t> count(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(join(path, key), "expected a nonnegative integer");
      return std::nullopt;
    }
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    if (!obj.at(key).is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    if (!obj.at(key).is_boolean()) {
      fail(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return obj.at(key).get<bool>();
  }

  std::optional<std::vector<double>> numbers(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      fail(join(path, key), "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) {
        fail(join(path, key), "expected an array of numbers");
        return std::nullopt;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

Vec3 to_vec(const std::vector<double>& v) {
  Vec3 r;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, v.size()); ++i) r[i] = v[i];
  return r;
}

json vec_json(const Vec3& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[static_cast<std::size_t>(i)]);
  return a;
}

RateBand parse_band(Reader& rd, const json& obj, const std::string& key, const std::string& path, RateBand fallback) {
  auto v = rd.numbers(obj, key, path);
  if (!v) return fallback;
  if (v->size() != 2 || !((*v)[0] <= (*v)[1])) {
    rd.fail(Reader::join(path, key), "expected [lo, hi] with lo <= hi");
    return fallback;
  }
  return {(*v)[0], (*v)[1]};
}

}  // namespace

double DtRule::value(double eps) const { return coefficient * std::pow(eps, power); }

std::string to_string(Stepper s) { return s == Stepper::semi_implicit ? "semi-implicit" : "explicit"; }
std::string to_string(GridMode m) { return m == GridMode::full ? "full" : "radial"; }

ConfigDocument parse_config(const json& root) {
  Reader rd;
  ConfigDocument doc;
  SimulationConfig& cfg = doc.base;
  if (!root.is_object()) throw ConfigError({"(root): expected a JSON object"});
  rd.known_keys(root, "", {"epsilon", "potential", "trajectory", "cutoff", "grid", "stepper", "diagnostics", "profile",
                           "sweep"});

  if (auto e = rd.number(root, "epsilon", "")) {
    if (*e > 0.0)
      cfg.epsilon = *e;
    else
      rd.fail("epsilon", "must be positive");
  }

  // potential
  const json pot = rd.section(root, "potential", "potential");
  rd.known_keys(pot, "potential", {"name", "coefficients", "normalize"});
  const auto coeffs = rd.numbers(pot, "coefficients", "potential");
  const auto pname = rd.string(pot, "name", "potential");
  if (coeffs) {
    try {
      cfg.potential = PotentialSpec::polynomial(*coeffs, pname.value_or("polynomial"),
                                                rd.boolean(pot, "normalize", "potential").value_or(false));
    } catch (const std::invalid_argument& e) {
      rd.fail("potential.coefficients", e.what());
    }
  } else {
    try {
      cfg.potential = potential_by_name(pname.value_or("standard"));
    } catch (const std::invalid_argument& e) {
      rd.fail("potential.name", e.what());
    }
  }

  // stepper (T_end feeds the trajectory horizon default)
  const json st = rd.section(root, "stepper", "stepper");
  rd.known_keys(st, "stepper", {"scheme", "dt", "dt_rule", "T_end"});
  if (auto s = rd.string(st, "scheme", "stepper")) {
    if (*s == "semi-implicit")
      cfg.stepper = Stepper::semi_implicit;
    else if (*s == "explicit")
      cfg.stepper = Stepper::explicit_euler;
    else
      rd.fail("stepper.scheme", "expected \"semi-implicit\" or \"explicit\", got \"" + *s + "\"");
  }
  doc.dt = rd.number(st, "dt", "stepper");
  const json rule = rd.section(st, "dt_rule", "stepper.dt_rule");
  rd.known_keys(rule, "stepper.dt_rule", {"coefficient", "power"});
  doc.dt_rule.coefficient = rd.number_or(rule, "coefficient", "stepper.dt_rule", doc.dt_rule.coefficient);
  doc.dt_rule.power = rd.number_or(rule, "power", "stepper.dt_rule", doc.dt_rule.power);
  if (!(doc.dt_rule.coefficient > 0.0)) rd.fail("stepper.dt_rule.coefficient", "must be positive");
  cfg.t_end = rd.number_or(st, "T_end", "stepper", cfg.t_end);

  // grid
  const json gr = rd.section(root, "grid", "grid");
  rd.known_keys(gr, "grid", {"mode", "dimension", "L", "N", "h_over_eps"});
  if (auto m = rd.string(gr, "mode", "grid")) {
    if (*m == "full")
      cfg.grid.mode = GridMode::full;
    else if (*m == "radial")
      cfg.grid.mode = GridMode::radial;
    else
      rd.fail("grid.mode", "expected \"full\" or \"radial\", got \"" + *m + "\"");
  }
  if (auto d = rd.count(gr, "dimension", "grid")) cfg.grid.dim = static_cast<int>(*d);
  cfg.grid.L = rd.number_or(gr, "L", "grid", cfg.grid.L);
  doc.grid_n = rd.count(gr, "N", "grid");
  doc.h_over_eps = rd.number_or(gr, "h_over_eps", "grid", doc.h_over_eps);
  if (!(doc.h_over_eps > 0.0)) rd.fail("grid.h_over_eps", "must be positive");

  // trajectory
  const json tr = rd.section(root, "trajectory", "trajectory");
  rd.known_keys(tr, "trajectory", {"type", "d", "normal", "offset", "R0", "center", "T_max"});
  const std::string type = rd.string(tr, "type", "trajectory").value_or("plane");
  const int tdim = static_cast<int>(rd.count(tr, "d", "trajectory").value_or(static_cast<std::size_t>(cfg.grid.dim)));
  const double t_max = rd.number_or(tr, "T_max", "trajectory", cfg.t_end);
  try {
    if (type == "plane") {
      const Vec3 normal = to_vec(rd.numbers(tr, "normal", "trajectory").value_or(std::vector<double>{1.0}));
      cfg.trajectory = InterfaceTrajectory::plane(tdim, normal, rd.number_or(tr, "offset", "trajectory", 0.0), t_max);
    } else if (type == "sphere") {
      const Vec3 center = to_vec(rd.numbers(tr, "center", "trajectory").value_or(std::vector<double>{}));
      cfg.trajectory =
          InterfaceTrajectory::sphere(tdim, center, rd.number_or(tr, "R0", "trajectory", 1.0), t_max);
    } else {
      rd.fail("trajectory.type", "expected \"plane\" or \"sphere\", got \"" + type + "\"");
    }
  } catch (const std::invalid_argument& e) {
    rd.fail(tr.contains("T_max") ? "trajectory.T_max" : "trajectory", e.what());
  }

  // cutoff
  const json cu = rd.section(root, "cutoff", "cutoff");
  rd.known_keys(cu, "cutoff", {"r_c", "c_quad"});
  doc.r_c = rd.number(cu, "r_c", "cutoff");
  cfg.cutoff.c_quad = rd.number_or(cu, "c_quad", "cutoff", cfg.cutoff.c_quad);

  // diagnostics
  const json di = rd.section(root, "diagnostics", "diagnostics");
  rd.known_keys(di, "diagnostics", {"cadence", "identity", "snapshot_times", "s0"});
  cfg.cadence = rd.count(di, "cadence", "diagnostics").value_or(cfg.cadence);
  cfg.identity = rd.boolean(di, "identity", "diagnostics").value_or(cfg.identity);
  cfg.snapshot_times = rd.numbers(di, "snapshot_times", "diagnostics").value_or(std::vector<double>{});
  cfg.s0 = rd.number_or(di, "s0", "diagnostics", 0.0);

  const json pr = rd.section(root, "profile", "profile");
  rd.known_keys(pr, "profile", {"s_max", "samples"});
  cfg.profile_s_max = rd.number_or(pr, "s_max", "profile", cfg.profile_s_max);
  cfg.profile_samples = rd.count(pr, "samples", "profile").value_or(cfg.profile_samples);

  // sweep
  if (root.contains("sweep") && !root.at("sweep").is_null()) {
    const json sw = rd.section(root, "sweep", "sweep");
    rd.known_keys(sw, "sweep", {"epsilons", "bands", "gronwall_factor"});
    SweepSettings s;
    s.epsilons = rd.numbers(sw, "epsilons", "sweep").value_or(std::vector<double>{});
    const json bands = rd.section(sw, "bands", "sweep.bands");
    rd.known_keys(bands, "sweep.bands", {"err_L1", "rel_entropy", "initial_entropy"});
    s.err_l1 = parse_band(rd, bands, "err_L1", "sweep.bands", s.err_l1);
    s.rel_entropy = parse_band(rd, bands, "rel_entropy", "sweep.bands", s.rel_entropy);
    s.initial_entropy = parse_band(rd, bands, "initial_entropy", "sweep.bands", s.initial_entropy);
    s.gronwall_factor = rd.number_or(sw, "gronwall_factor", "sweep", s.gronwall_factor);
    for (double e : s.epsilons)
      if (!(e > 0.0)) rd.fail("sweep.epsilons", "every epsilon must be positive");
    for (std::size_t i = 1; i < s.epsilons.size(); ++i)
      if (!(s.epsilons[i] < s.epsilons[i - 1])) rd.fail("sweep.epsilons", "must be strictly descending");
    doc.sweep = s;
  }

  if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
  return doc;
}

ConfigDocument load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path.string() + "'"});
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config: malformed JSON in '" + path.string() + "': " + e.what()});
  }
  return parse_config(root);
}

SimulationConfig materialize(const ConfigDocument& doc, double epsilon) {
  SimulationConfig cfg = doc.base;
  cfg.epsilon = epsilon;
  if (doc.grid_n) {
    cfg.grid.n = *doc.grid_n;
  } else if (epsilon > 0.0 && cfg.grid.L > 0.0) {
    const double h = doc.h_over_eps * epsilon;
    const double cells = (cfg.grid.mode == GridMode::radial ? 1.0 : 2.0) * cfg.grid.L / h;
    cfg.grid.n = static_cast<std::size_t>(std::ceil(cells - 1e-9)) + (cfg.grid.mode == GridMode::radial ? 1 : 0);
  }
  cfg.dt = doc.dt ? *doc.dt : doc.dt_rule.value(epsilon);
  cfg.cutoff.r_c = doc.r_c ? *doc.r_c : default_cutoff_radius(cfg.trajectory);
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  const ConfigDocument doc = load_config_document(path);
  SimulationConfig cfg = materialize(doc, doc.base.epsilon);
  require_valid(cfg);
  return cfg;
}

json to_json(const SimulationConfig& cfg) {
  json j;
  j["epsilon"] = cfg.epsilon;
  const auto c = cfg.potential.coefficients();
  j["potential"] = {{"name", cfg.potential.name()},
                    {"coefficients", std::vector<double>(c.begin(), c.end())},
                    {"normalization", cfg.potential.normalization()},
                    {"max_ddW", cfg.potential.max_ddW_on_unit_interval()},
                    {"lower_bound_constant", cfg.potential.lower_bound_constant()}};
  const auto& tr = cfg.trajectory;
  if (const auto* p = tr.as_plane()) {
    j["trajectory"] = {{"type", "plane"},
                       {"d", tr.dim()},
                       {"normal", vec_json(p->normal, tr.dim())},
                       {"offset", p->offset},
                       {"T_max", tr.t_max()}};
  } else if (const auto* s = tr.as_sphere()) {
    j["trajectory"] = {{"type", "sphere"},
                       {"d", tr.dim()},
                       {"R0", s->initial_radius},
                       {"center", vec_json(s->center, tr.dim())},
                       {"T_max", tr.t_max()}};
  }
  j["cutoff"] = {{"r_c", cfg.cutoff.r_c},
                 {"c_quad", cfg.cutoff.c_quad},
                 {"eta_tilde", "quintic smoothstep on [r_c/4, r_c/2]"},
                 {"distance_control_constant", cfg.cutoff.distance_control_constant()}};
  j["grid"] = {{"mode", to_string(cfg.grid.mode)},
               {"dimension", cfg.grid.dim},
               {"L", cfg.grid.L},
               {"N", cfg.grid.n},
               {"h", cfg.grid.h()}};
  j["stepper"] = {{"scheme", to_string(cfg.stepper)}, {"dt", cfg.dt}, {"T_end", cfg.t_end}};
  j["diagnostics"] = {{"cadence", cfg.cadence},
                      {"identity", cfg.identity},
                      {"snapshot_times", cfg.snapshot_times},
                      {"s0", cfg.weight_scale()},
                      {"tau", "identity on |s| <= 1/2, quintic blend to sign(s) on 1/2 <= |s| <= 1"},
                      {"coercivity_slack", kCoercivitySlack}};
  j["profile"] = {{"s_max", cfg.profile_s_max}, {"samples", cfg.profile_samples}};
  return j;
}

json to_json(const SweepSettings& s) {
  return {{"epsilons", s.epsilons},
          {"bands",
           {{"err_L1", {s.err_l1.lo, s.err_l1.hi}},
            {"rel_entropy", {s.rel_entropy.lo, s.rel_entropy.hi}},
            {"initial_entropy", {s.initial_entropy.lo, s.initial_entropy.hi}}}},
          {"gronwall_factor", s.gronwall_factor}};
}

}  // namespace acrel
