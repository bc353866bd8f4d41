#pragma once

// Output files of a run: the diagnostics CSV and JSON snapshots of a graph.
// Every double is written with 17 significant digits (or the shortest
// round-trip form in JSON), so reading back is lossless.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/graph_geometry.hpp"
#include "hypflow/sphere_grid.hpp"

namespace hypflow {

using json = nlohmann::json;

inline constexpr const char* kTimeseriesHeader =
    "t,area,volume,h_bar,sup_dev,kappa_margin,rho_min,rho_max,renorm_delta";
inline constexpr const char* kSnapshotFormat = "hypflow-snapshot";
inline constexpr int kSnapshotSchemaVersion = 1;

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_timeseries(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  os << kTimeseriesHeader << '\n';
  for (const auto& r : rows) {
    const double cols[] = {r.t,            r.area,    r.volume,  r.h_bar,       r.sup_dev,
                           r.kappa_margin, r.rho_min, r.rho_max, r.renorm_delta};
    bool first = true;
    for (double c : cols) {
      if (!first) os << ',';
      os << format_double(c);
      first = false;
    }
    os << '\n';
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_timeseries(const std::filesystem::path& path, const Trajectory& trajectory) {
  if (trajectory.rows.empty()) throw ConfigError("empty trajectory");
  std::ostringstream os;
  write_timeseries(os, trajectory.rows);
  write_text_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Snapshots

struct Snapshot {
  double t;
  RadialGraph graph;
};

inline json snapshot_json(const FlowState& state) {
  const Grid& grid = *state.graph.grid();
  return json{{"format", kSnapshotFormat},
              {"schema_version", kSnapshotSchemaVersion},
              {"lambda", state.graph.params().lambda()},
              {"topology", to_string(grid.topology())},
              {"n", grid.dim()},
              {"m", grid.size()},
              {"t", state.t},
              {"rho", state.graph.rho().vector()}};
}

inline Snapshot parse_snapshot(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("snapshot must be a JSON object");
  static const char* const kKeys[] = {"format", "schema_version", "lambda", "topology", "n", "m", "t", "rho"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw FormatError("unknown snapshot field '" + key + "'");
    }
  }
  try {
    if (doc.at("format").get<std::string>() != kSnapshotFormat) throw FormatError("not a snapshot document");
    if (doc.at("schema_version").get<int>() != kSnapshotSchemaVersion) {
      throw FormatError("unsupported snapshot schema version " + doc.at("schema_version").dump());
    }
    const auto topo_name = doc.at("topology").get<std::string>();
    Topology topology;
    if (topo_name == "circle") {
      topology = Topology::Circle;
    } else if (topo_name == "axisymmetric") {
      topology = Topology::Axisymmetric;
    } else {
      throw FormatError("unknown topology '" + topo_name + "'");
    }
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    const double t = doc.at("t").get<double>();
    auto rho = doc.at("rho").get<std::vector<double>>();
    if (!std::isfinite(t)) throw FormatError("snapshot time must be finite");
    if (static_cast<int>(rho.size()) != m) {
      throw FormatError("snapshot has " + std::to_string(rho.size()) + " radii but m = " + std::to_string(m));
    }
    const LambdaParams params(doc.at("lambda").get<double>());
    return Snapshot{t, RadialGraph(Grid::make(topology, n, m), std::move(rho), params)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed snapshot: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid snapshot: ") + e.what());
  }
}

inline void write_snapshot(const std::filesystem::path& path, const FlowState& state) {
  write_text_file(path, snapshot_json(state).dump(2) + "\n");
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(read_text_file(path));
}

}  // namespace hypflow
