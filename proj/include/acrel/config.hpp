#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acrel/solver.hpp"

namespace acrel {

// dt = coefficient * eps^power
struct DtRule {
  double coefficient = 0.05;
  double power = 2.0;

  double value(double eps) const;
};

struct RateBand {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

struct SweepSettings {
  std::vector<double> epsilons;
  RateBand err_l1{0.8, 1.2};
  RateBand rel_entropy{1.7, 2.3};
  RateBand initial_entropy{1.8, 2.2};
  double gronwall_factor = 2.0;
};

// A parsed configuration document before epsilon-dependent quantities are fixed. Grid size,
// step size and cutoff radius are either given explicitly or derived from epsilon by rules.
struct ConfigDocument {
  SimulationConfig base;
  std::optional<std::size_t> grid_n;
  double h_over_eps = 0.125;
  std::optional<double> dt;
  DtRule dt_rule;
  std::optional<double> r_c;
  std::optional<SweepSettings> sweep;
};

// Collects every problem in the document (type errors, unknown keys, bad values) into one ConfigError.
ConfigDocument parse_config(const nlohmann::json& doc);
ConfigDocument load_config_document(const std::filesystem::path& path);

// Concrete configuration for one epsilon; not validated.
SimulationConfig materialize(const ConfigDocument& doc, double epsilon);
// Materializes at the document's own epsilon and validates.
SimulationConfig load_config(const std::filesystem::path& path);

// Every field with its effective value, suitable for the run manifest.
nlohmann::json to_json(const SimulationConfig& cfg);
nlohmann::json to_json(const SweepSettings& sweep);

std::string to_string(Stepper s);
std::string to_string(GridMode m);

}  // namespace acrel
