#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "acrel/config.hpp"
#include "acrel/error.hpp"
#include "acrel/io.hpp"

using namespace acrel;
namespace fs = std::filesystem;

namespace {

nlohmann::json plane_doc() {
  return nlohmann::json::parse(R"({
    "epsilon": 0.05,
    "potential": {"name": "standard"},
    "trajectory": {"type": "plane", "d": 1, "normal": [1.0], "offset": 0.0},
    "cutoff": {"r_c": 0.5, "c_quad": 1.0},
    "grid": {"mode": "full", "dimension": 1, "L": 1.0, "h_over_eps": 0.125},
    "stepper": {"scheme": "semi-implicit", "dt_rule": {"coefficient": 0.05, "power": 2}, "T_end": 0.1},
    "diagnostics": {"cadence": 10, "identity": true, "snapshot_times": [0.0, 0.1]}
  })");
}

std::vector<std::string> violations_of(const nlohmann::json& doc) {
  try {
    const ConfigDocument d = parse_config(doc);
    const double eps = doc.contains("epsilon") ? doc["epsilon"].get<double>() : 0.05;
    return validate(materialize(d, eps));
  } catch (const ConfigError& e) {
    return e.violations();
  }
}

bool mentions(const std::vector<std::string>& v, const std::string& prefix) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("acrel_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("plane document materializes") {
  const SimulationConfig cfg = materialize(parse_config(plane_doc()), 0.05);
  CHECK(cfg.grid.n == 320);
  CHECK(cfg.grid.h() == doctest::Approx(0.05 / 8));
  CHECK(cfg.dt == doctest::Approx(0.05 * 0.05 * 0.05));
  CHECK(cfg.t_end == 0.1);
  CHECK(cfg.identity);
  CHECK(cfg.snapshot_times.size() == 2);
  CHECK(validate(cfg).empty());
  const auto j = to_json(cfg);
  CHECK(j["epsilon"] == 0.05);
  CHECK(j.contains("grid"));
}

TEST_CASE("config errors carry key paths") {
  auto doc = plane_doc();
  doc["grid"]["h_over_eps"] = 0.5;
  CHECK(mentions(violations_of(doc), "grid.N: layer resolution rule violated"));

  doc = plane_doc();
  doc["cutoff"]["c_quad"] = "one";
  CHECK(mentions(violations_of(doc), "cutoff.c_quad"));

  doc = plane_doc();
  doc["stepper"]["colour"] = 1;
  CHECK(mentions(violations_of(doc), "stepper.colour"));

  doc = plane_doc();
  doc["potential"] = {{"name", "nosuch"}};
  CHECK(mentions(violations_of(doc), "potential"));

  doc = plane_doc();
  doc["potential"] = {{"coefficients", {1.0, 0.0, 1.0}}};
  CHECK(mentions(violations_of(doc), "potential"));

  doc = plane_doc();
  doc["stepper"]["scheme"] = "leapfrog";
  doc["epsilon"] = -1.0;
  const auto v = violations_of(doc);
  CHECK(mentions(v, "stepper.scheme"));
  CHECK(mentions(v, "epsilon"));

  doc = plane_doc();
  doc["trajectory"]["type"] = "torus";
  CHECK(mentions(violations_of(doc), "trajectory.type"));
}

TEST_CASE("explicit values override rules") {
  auto doc = plane_doc();
  doc["grid"].erase("h_over_eps");
  doc["grid"]["N"] = 400;
  doc["stepper"].erase("dt_rule");
  doc["stepper"]["dt"] = 1e-4;
  const SimulationConfig cfg = materialize(parse_config(doc), 0.05);
  CHECK(cfg.grid.n == 400);
  CHECK(cfg.dt == 1e-4);
}

TEST_CASE("polynomial potential from coefficients") {
  auto doc = plane_doc();
  doc["potential"] = {{"coefficients", {1.0, 0.0, -2.0, 0.0, 1.0}}, {"normalize", true}};
  const SimulationConfig cfg = materialize(parse_config(doc), 0.05);
  CHECK(cfg.potential.normalization() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(cfg.potential.W(0.0) == doctest::Approx(9.0 / 8.0).epsilon(1e-8));
}

TEST_CASE("file loading") {
  const fs::path dir = scratch("load");
  std::ofstream(dir / "good.json") << plane_doc().dump();
  CHECK(load_config(dir / "good.json").epsilon == 0.05);
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("snapshot round-trip") {
  const fs::path dir = scratch("snap");
  const SimulationConfig cfg = materialize(parse_config(plane_doc()), 0.05);
  ScalarField u = initial_data(cfg);
  write_snapshot(dir / "s.bin", u, 0.05, 0.25, {{"step", 7}});
  const Snapshot s = read_snapshot(dir / "s.bin");
  REQUIRE(s.shape.size() == 1);
  CHECK(s.shape[0] == 320);
  CHECK(s.h == cfg.grid.h());
  CHECK(s.L == 1.0);
  CHECK(s.epsilon == 0.05);
  CHECK(s.t == 0.25);
  CHECK(s.values == u.values);
  const auto side = nlohmann::json::parse(slurp(dir / "s.bin.json"));
  CHECK(side["step"] == 7);

  auto grid2 = make_grid(GridSpec{GridMode::full, 2, 1.0, 16});
  ScalarField v(grid2, 0.5);
  v.values[17] = -0.25;
  write_snapshot(dir / "t.bin", v, 0.1, 0.0);
  const Snapshot s2 = read_snapshot(dir / "t.bin");
  CHECK(s2.shape == std::vector<std::int64_t>{16, 16});
  CHECK(s2.values == v.values);
  fs::remove_all(dir);
}

TEST_CASE("diagnostics CSV") {
  std::vector<RunRecord> series(2);
  series[1].t = 0.5;
  series[1].diagnostics.t = 0.5;
  series[1].diagnostics.rel_entropy = 0.125;
  const std::string csv = diagnostics_csv(series);
  std::istringstream in(csv);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header ==
        "t,gl_energy,dissipation,rel_entropy,equipartition_defect,misalignment,tilt_excess,dist_weighted_energy,"
        "defect_sq_curvature,defect_sq_velocity,err_L1,err_weighted,identity_residual");
  CHECK(row1.rfind("0.5,", 0) == 0);
  CHECK(row1.find(",0.125,") != std::string::npos);
  CHECK(row1.substr(row1.size() - 3) == "nan");
  CHECK(std::count(row0.begin(), row0.end(), ',') == 12);
}

TEST_CASE("profile CSV and plot script") {
  const fs::path dir = scratch("profile");
  const ProfileTable table = solve_profile(make_standard_potential(), 8.0, 1025);
  write_profile_csv(dir / "p.csv", table);
  std::istringstream in(slurp(dir / "p.csv"));
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  CHECK(line.find("theta") != std::string::npos);
  while (std::getline(in, line)) ++rows;
  CHECK(rows == table.abscissae().size());
  const std::string gp = plot_script("diagnostics.csv", "run");
  CHECK(gp.find("diagnostics.csv") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("manifest lists existing artifacts only") {
  const fs::path dir = scratch("manifest");
  write_text_atomic(dir / "a.csv", "x\n");
  RunManifest m;
  m.command = "simulate";
  m.output_dir = dir.string();
  m.config = {{"epsilon", 0.1}};
  m.artifacts = {"a.csv"};
  m.timings_s = {{"total", 1.5}};
  write_manifest(dir, m);
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["command"] == "simulate");
  CHECK(j["artifacts"].size() == 1);
  CHECK(j["tool_version"] == tool_version());
  CHECK(j["exit_code"] == 0);
  m.artifacts.push_back("missing.bin");
  CHECK_THROWS_AS(write_manifest(dir, m), Error);
  fs::remove_all(dir);
}
