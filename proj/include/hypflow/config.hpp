#pragma once

// Run configuration: command-line flags, optional JSON config file (or a run
// manifest, whose "config" echo reproduces that run), and the manifest writer.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypflow/errors.hpp"
#include "hypflow/flow.hpp"
#include "hypflow/io.hpp"
#include "hypflow/presets.hpp"
#include "hypflow/version.hpp"

namespace hypflow {

struct RunConfig {
  PresetSpec preset;
  FlowConfig flow;
  std::string out_dir = "hypflow_out";
};

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number '" + text + "' for " + what);
  }
  return v;
}

inline int parse_integer(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("invalid integer '" + text + "' for " + what);
  return static_cast<int>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

/// "sphere:r0", "perturbed:r0,amplitude,k", "offset:r_sphere,z0,z1[,z2...]", "custom:path".
inline PresetShape parse_preset(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "custom") {
    if (rest.empty()) throw ConfigError("custom preset needs a snapshot path");
    return CustomPreset{rest};
  }
  std::vector<double> v;
  if (!rest.empty()) {
    for (const auto& part : detail::split(rest, ',')) v.push_back(detail::parse_number(part, "--preset " + name));
  }
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi) {
      throw ConfigError("preset '" + name + "' takes " + std::to_string(lo) +
                        (hi > lo ? " or more" : "") + " parameters, got " + std::to_string(v.size()));
    }
  };
  if (name == "sphere") {
    if (v.empty()) return SpherePreset{};
    arity(1, 1);
    return SpherePreset{v[0]};
  }
  if (name == "perturbed") {
    if (v.empty()) return PerturbedSpherePreset{};
    arity(3, 3);
    if (v[2] != std::floor(v[2])) throw ConfigError("harmonic degree must be an integer");
    return PerturbedSpherePreset{v[0], v[1], static_cast<int>(v[2])};
  }
  if (name == "offset") {
    arity(2, 64);
    return OffsetSpherePreset{v[0], v[1], std::vector<double>(v.begin() + 2, v.end())};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

inline std::string preset_to_string(const PresetShape& shape) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SpherePreset>) {
          return "sphere:" + format_double(s.r0);
        } else if constexpr (std::is_same_v<T, PerturbedSpherePreset>) {
          return "perturbed:" + format_double(s.r0) + "," + format_double(s.amplitude) + "," +
                 std::to_string(s.harmonic);
        } else if constexpr (std::is_same_v<T, OffsetSpherePreset>) {
          std::string out = "offset:" + format_double(s.r_sphere) + "," + format_double(s.z0);
          for (double z : s.z) out += "," + format_double(z);
          return out;
        } else {
          return "custom:" + s.path;
        }
      },
      shape);
}

namespace detail {

// Option values as text, keyed by their long name without dashes.
using RawOptions = std::map<std::string, std::string>;

inline const std::vector<std::string>& option_keys() {
  static const std::vector<std::string> keys = {
      "lambda", "dim",      "grid",          "mode",   "scheme", "preset",  "dt",    "cfl",
      "t-max",  "cadence",  "renormalize",   "stop-tol", "target-volume", "min-dt", "out"};
  return keys;
}

inline std::string json_key(std::string flag) {
  std::replace(flag.begin(), flag.end(), '-', '_');
  return flag;
}

inline RawOptions read_config_file(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("artifact") && doc.contains("config")) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError("config file " + path + " must hold a JSON object");
  RawOptions raw;
  for (const auto& [key, value] : doc.items()) {
    const auto& keys = option_keys();
    auto it = std::find_if(keys.begin(), keys.end(), [&](const std::string& k) { return json_key(k) == key; });
    if (it == keys.end()) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_null()) continue;
    if (value.is_string()) {
      raw[*it] = value.get<std::string>();
    } else if (value.is_number()) {
      raw[*it] = value.is_number_integer() ? std::to_string(value.get<long long>())
                                           : format_double(value.get<double>());
    } else if (value.is_boolean()) {
      raw[*it] = value.get<bool>() ? "on" : "off";
    } else {
      throw ConfigError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return raw;
}

}  // namespace detail

/// Builds the run configuration from command-line arguments (without the
/// program name). Flags override values from --config. Throws ConfigError
/// for unknown or contradictory options and HelpRequested for --help.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Mean curvature flows of radial graphs in hyperbolic space", "hypflow"};
  detail::RawOptions flags;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file or run manifest");
  const std::map<std::string, std::string> help = {
      {"lambda", "ambient curvature (negative), default -1"},
      {"dim", "hypersurface dimension n, default 1"},
      {"grid", "grid nodes m, default 256"},
      {"mode", "mcf or vpmcf, default vpmcf"},
      {"scheme", "rk2 or semi-implicit, default rk2"},
      {"preset", "sphere:r0 | perturbed:r0,a,k | offset:rS,z0,z1[,...] | custom:snapshot.json"},
      {"dt", "fixed time step (exclusive with --cfl)"},
      {"cfl", "adaptive step factor in (0, 0.5], default 0.25"},
      {"t-max", "final time, default 10"},
      {"cadence", "output interval, default 0.1"},
      {"renormalize", "on or off; default on for vpmcf"},
      {"stop-tol", "stop when sup|H - H_bar| falls below this (vpmcf), default 1e-12"},
      {"target-volume", "volume to preserve, default the initial volume"},
      {"min-dt", "smallest adaptive step before declaring a singularity, default 1e-10"},
      {"out", "output directory, default hypflow_out"}};
  for (const auto& key : detail::option_keys()) {
    app.add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, help.at(key));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  detail::RawOptions raw;
  if (!config_path.empty()) raw = detail::read_config_file(config_path);
  for (const auto& [k, v] : flags) raw[k] = v;

  if (flags.count("dt") && flags.count("cfl")) throw ConfigError("--dt and --cfl are mutually exclusive");
  if (raw.count("dt") && raw.count("cfl")) {
    // A flag overrides its file counterpart; drop the other step policy.
    if (flags.count("dt")) raw.erase("cfl");
    else if (flags.count("cfl")) raw.erase("dt");
    else throw ConfigError("config sets both dt and cfl");
  }

  RunConfig cfg;
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = raw.find(k);
    if (it == raw.end()) return std::nullopt;
    return it->second;
  };

  if (auto v = get("preset")) cfg.preset.shape = parse_preset(*v);
  const bool custom = std::holds_alternative<CustomPreset>(cfg.preset.shape);
  if (custom && (get("lambda") || get("dim") || get("grid"))) {
    throw ConfigError("custom presets take lambda, dimension and grid from the snapshot");
  }
  if (auto v = get("lambda")) cfg.preset.lambda = detail::parse_number(*v, "--lambda");
  if (auto v = get("dim")) cfg.preset.dim = detail::parse_integer(*v, "--dim");
  if (auto v = get("grid")) cfg.preset.grid_nodes = detail::parse_integer(*v, "--grid");
  if (!(cfg.preset.lambda < 0.0)) throw ConfigError("--lambda must be negative");
  if (cfg.preset.dim < 1) throw ConfigError("--dim must be at least 1");
  if (cfg.preset.grid_nodes < Grid::kMinNodes) {
    throw ConfigError("--grid must be at least " + std::to_string(Grid::kMinNodes) + " (m below minimum)");
  }

  if (auto v = get("mode")) {
    if (*v == "mcf") cfg.flow.mode = FlowMode::MCF;
    else if (*v == "vpmcf") cfg.flow.mode = FlowMode::VPMCF;
    else throw ConfigError("--mode must be mcf or vpmcf, got '" + *v + "'");
  }
  if (auto v = get("scheme")) {
    if (*v == "rk2") cfg.flow.scheme = TimeScheme::ExplicitRK2;
    else if (*v == "semi-implicit") cfg.flow.scheme = TimeScheme::SemiImplicit;
    else throw ConfigError("--scheme must be rk2 or semi-implicit, got '" + *v + "'");
  }
  if (auto v = get("dt")) cfg.flow.dt = detail::parse_number(*v, "--dt");
  if (auto v = get("cfl")) cfg.flow.cfl = detail::parse_number(*v, "--cfl");
  if (auto v = get("t-max")) cfg.flow.t_max = detail::parse_number(*v, "--t-max");
  if (auto v = get("cadence")) cfg.flow.cadence = detail::parse_number(*v, "--cadence");
  if (auto v = get("stop-tol")) cfg.flow.stop_tolerance = detail::parse_number(*v, "--stop-tol");
  if (auto v = get("target-volume")) cfg.flow.target_volume = detail::parse_number(*v, "--target-volume");
  if (auto v = get("min-dt")) cfg.flow.min_dt = detail::parse_number(*v, "--min-dt");
  cfg.flow.renormalize_volume = cfg.flow.mode == FlowMode::VPMCF;
  if (auto v = get("renormalize")) {
    if (*v == "on") cfg.flow.renormalize_volume = true;
    else if (*v == "off") cfg.flow.renormalize_volume = false;
    else throw ConfigError("--renormalize must be on or off, got '" + *v + "'");
  }
  if (auto v = get("out")) cfg.out_dir = *v;
  if (cfg.out_dir.empty()) throw ConfigError("--out must not be empty");

  cfg.flow.validate();
  if (!custom) {
    // Fails early on impossible grid / dimension pairs.
    Grid::for_dimension(cfg.preset.dim, cfg.preset.grid_nodes);
  }
  return cfg;
}

/// Full echo of a configuration, readable back through --config.
inline json config_json(const RunConfig& cfg) {
  const bool custom = std::holds_alternative<CustomPreset>(cfg.preset.shape);
  json j;
  j["preset"] = preset_to_string(cfg.preset.shape);
  j["lambda"] = custom ? json(nullptr) : json(cfg.preset.lambda);
  j["dim"] = custom ? json(nullptr) : json(cfg.preset.dim);
  j["grid"] = custom ? json(nullptr) : json(cfg.preset.grid_nodes);
  j["mode"] = to_string(cfg.flow.mode);
  j["scheme"] = to_string(cfg.flow.scheme);
  j["dt"] = cfg.flow.dt ? json(*cfg.flow.dt) : json(nullptr);
  j["cfl"] = cfg.flow.dt ? json(nullptr) : json(cfg.flow.cfl);
  j["t_max"] = cfg.flow.t_max;
  j["cadence"] = cfg.flow.cadence;
  j["renormalize"] = cfg.flow.renormalize_volume ? "on" : "off";
  j["stop_tol"] = cfg.flow.stop_tolerance;
  j["target_volume"] = cfg.flow.target_volume ? json(*cfg.flow.target_volume) : json(nullptr);
  j["min_dt"] = cfg.flow.min_dt;
  j["out"] = cfg.out_dir;
  return j;
}

/// Initial graph and start time of a run (snapshot time for custom presets).
struct InitialCondition {
  RadialGraph graph;
  double t0 = 0.0;
};

inline InitialCondition build_initial(const RunConfig& cfg) {
  if (auto* custom = std::get_if<CustomPreset>(&cfg.preset.shape)) {
    auto snap = read_snapshot(custom->path);
    return {std::move(snap.graph), snap.t};
  }
  return {build_preset(cfg.preset), 0.0};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  json config;
  std::string start_time;
  std::string end_time;
  std::string termination;
  long steps = 0;
};

inline json manifest_json(const RunManifest& m) {
  return json{{"artifact", "hypflow"},       {"version", kVersion},     {"config", m.config},
              {"start_time", m.start_time}, {"end_time", m.end_time}, {"termination", m.termination},
              {"steps", m.steps}};
}

}  // namespace hypflow
