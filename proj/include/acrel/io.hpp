#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "acrel/diagnostics.hpp"
#include "acrel/grid.hpp"
#include "acrel/potential.hpp"
#include "acrel/solver.hpp"

namespace acrel {

inline constexpr int kManifestSchemaVersion = 1;

std::string tool_version();

// Shortest round-trip text for a double ("nan" for NaN).
std::string format_double(double v);

// Writes content to path via a temporary sibling and a rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string diagnostics_csv(const std::vector<RunRecord>& series);
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<RunRecord>& series);

void write_profile_csv(const std::filesystem::path& path, const ProfileTable& table);

// Binary field file: int64 axis count, int64 extent per axis, float64 h, L, eps, t, then the
// values in storage order; all little-endian. A JSON sidecar <path>.json repeats the header.
struct Snapshot {
  std::vector<std::int64_t> shape;
  double h = 0.0;
  double L = 0.0;
  double epsilon = 0.0;
  double t = 0.0;
  std::vector<double> values;
};

void write_snapshot(const std::filesystem::path& path, const ScalarField& u, double epsilon, double t,
                    const nlohmann::json& extra = nlohmann::json::object());
Snapshot read_snapshot(const std::filesystem::path& path);

// gnuplot script charting E[u|I], the dissipation and err_L1 against t from the named CSV.
std::string plot_script(const std::string& csv_name, const std::string& title);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string output_dir;
  nlohmann::json config;
  std::vector<std::string> artifacts;  // relative to output_dir
  std::vector<std::pair<std::string, double>> timings_s;
  int exit_code = 0;

  nlohmann::json to_json() const;
};

// Fails with an Error when a listed artifact is missing; written last so its presence marks completion.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace acrel
