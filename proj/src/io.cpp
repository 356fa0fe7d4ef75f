#include "acrel/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "acrel/error.hpp"

namespace acrel {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("snapshot: truncated file");
  return v;
}

}  // namespace

std::string tool_version() { return ACREL_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string diagnostics_csv(const std::vector<RunRecord>& series) {
  std::ostringstream os;
  for (std::size_t k = 0; k < kDiagnosticColumns.size(); ++k) os << (k ? "," : "") << kDiagnosticColumns[k];
  os << '\n';
  for (const auto& rec : series) {
    const auto row = csv_row(rec.diagnostics);
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_double(row[k]);
    os << '\n';
  }
  return os.str();
}

void write_diagnostics_csv(const fs::path& path, const std::vector<RunRecord>& series) {
  write_text_atomic(path, diagnostics_csv(series));
}

void write_profile_csv(const fs::path& path, const ProfileTable& table) {
  std::ostringstream os;
  os << "s,theta,dtheta\n";
  const auto s = table.abscissae();
  const auto v = table.values();
  const auto d = table.derivatives();
  for (std::size_t i = 0; i < s.size(); ++i)
    os << format_double(s[i]) << ',' << format_double(v[i]) << ',' << format_double(d[i]) << '\n';
  write_text_atomic(path, os.str());
}

void write_snapshot(const fs::path& path, const ScalarField& u, double epsilon, double t, const nlohmann::json& extra) {
  const Grid& g = *u.grid;
  std::vector<std::int64_t> shape(static_cast<std::size_t>(g.axes()), static_cast<std::int64_t>(g.n()));
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    put<std::int64_t>(out, static_cast<std::int64_t>(shape.size()));
    for (auto s : shape) put<std::int64_t>(out, s);
    put(out, g.h());
    put(out, g.L());
    put(out, epsilon);
    put(out, t);
    out.write(reinterpret_cast<const char*>(u.values.data()),
              static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
  nlohmann::json meta = extra;
  meta["format"] = "acrel-field";
  meta["byte_order"] = "little";
  meta["axes"] = shape.size();
  meta["shape"] = shape;
  meta["mode"] = g.is_radial() ? "radial" : "full";
  meta["dimension"] = g.dim();
  meta["h"] = g.h();
  meta["L"] = g.L();
  meta["epsilon"] = epsilon;
  meta["t"] = t;
  meta["clamp_count"] = u.clamp_count;
  write_text_atomic(path.string() + ".json", meta.dump(2) + "\n");
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  Snapshot s;
  const auto axes = get<std::int64_t>(in);
  if (axes < 1 || axes > 3) throw Error("snapshot: bad axis count");
  std::size_t count = 1;
  for (std::int64_t a = 0; a < axes; ++a) {
    s.shape.push_back(get<std::int64_t>(in));
    if (s.shape.back() <= 0) throw Error("snapshot: bad extent");
    count *= static_cast<std::size_t>(s.shape.back());
  }
  s.h = get<double>(in);
  s.L = get<double>(in);
  s.epsilon = get<double>(in);
  s.t = get<double>(in);
  s.values.resize(count);
  in.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error("snapshot: truncated values");
  return s;
}

std::string plot_script(const std::string& csv_name, const std::string& title) {
  std::ostringstream os;
  os << "# gnuplot -persist plot.gp\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set multiplot layout 3,1 title '" << title << "'\n"
     << "set ylabel 'E[u|I]'\n"
     << "plot '" << csv_name << "' using 1:4 with linespoints\n"
     << "set ylabel 'dissipation'\n"
     << "plot '" << csv_name << "' using 1:3 with linespoints\n"
     << "set ylabel 'err_L1'\n"
     << "plot '" << csv_name << "' using 1:11 with linespoints\n"
     << "unset multiplot\n";
  return os.str();
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [k, v] : timings_s) timings[k] = v;
  return {{"schema_version", kManifestSchemaVersion},
          {"tool", "acrel"},
          {"tool_version", tool_version()},
          {"command", command},
          {"config_path", config_path},
          {"output_dir", output_dir},
          {"config", config},
          {"artifacts", artifacts},
          {"timings_s", timings},
          {"exit_code", exit_code}};
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  for (const auto& a : manifest.artifacts)
    if (!fs::exists(dir / a)) throw Error("manifest lists missing artifact '" + a + "'");
  write_text_atomic(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace acrel
