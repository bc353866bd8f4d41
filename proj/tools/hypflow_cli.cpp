// hypflow: runs MCF / VPMCF from a preset and writes
//   <out>/timeseries.csv, <out>/final_snapshot.json, <out>/manifest.json.
// Exit codes: 0 success, 1 configuration or format error, 2 numerical
// failure, 3 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <system_error>
#include <vector>

#include "hypflow/hypflow.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw hypflow::IoError("cannot create output directory " + dir.string());
  }
}

void write_outputs(const hypflow::RunConfig& cfg, const hypflow::Trajectory& traj,
                   const hypflow::RunManifest& manifest) {
  const std::filesystem::path dir(cfg.out_dir);
  if (!traj.rows.empty()) hypflow::write_timeseries(dir / "timeseries.csv", traj);
  if (traj.final_state) hypflow::write_snapshot(dir / "final_snapshot.json", *traj.final_state);
  hypflow::write_text_file(dir / "manifest.json", hypflow::manifest_json(manifest).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hypflow;
  const auto start = std::chrono::system_clock::now();
  const std::vector<std::string> args(argv + 1, argv + argc);

  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    std::fputs(h.what(), stdout);
    return kOk;
  } catch (const IoError& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    return kIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    return kConfig;
  }

  std::optional<InitialCondition> init;
  try {
    init.emplace(build_initial(cfg));
    if (!(init->t0 < cfg.flow.t_max)) {
      throw ConfigError("snapshot time " + format_double(init->t0) + " is not before t_max");
    }
    ensure_directory(cfg.out_dir);
  } catch (const IoError& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    return kIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    return kConfig;
  }

  RunManifest manifest;
  manifest.config = config_json(cfg);
  manifest.start_time = utc_timestamp(start);

  Trajectory traj;
  int code = kOk;
  try {
    run_into(traj, init->graph, cfg.flow, init->t0);
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "hypflow: numerical failure at t = %.17g: %s\n", e.time(), e.what());
    code = kNumerical;
  } catch (const Error& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    traj.termination = std::string("error: ") + e.what();
    code = kConfig;
  }

  manifest.termination = traj.termination;
  manifest.steps = traj.steps;
  manifest.end_time = utc_timestamp(std::chrono::system_clock::now());
  try {
    write_outputs(cfg, traj, manifest);
  } catch (const Error& e) {
    std::fprintf(stderr, "hypflow: error: %s\n", e.what());
    return kIo;
  }

  if (code == kOk) {
    const auto& last = traj.rows.back();
    std::printf("%s after %ld steps: t = %.6g, sup|H - H_bar| = %.3e, volume = %.12g\n",
                traj.termination.c_str(), traj.steps, last.t, last.sup_dev, last.volume);
  }
  return code;
}
