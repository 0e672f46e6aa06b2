#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include "liouvtraj/sweep.hpp"
#include "liouvtraj/validate.hpp"

namespace {

std::string preset_list() {
  std::string s;
  for (const auto& n : liouvtraj::preset_names()) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace liouvtraj;

  CLI::App app{
      "Liouvillian spectra and quantum-trajectory localization diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset, out_dir = "out";
  std::uint64_t seed = 0;
  int threads = std::max(1u, std::thread::hardware_concurrency());

  app.add_option("--config", config_path,
                 "Experiment configuration JSON file");
  app.add_option("--preset", preset,
                 "Built-in configuration (" + preset_list() + ")");
  app.add_option("--out", out_dir, "Output directory")
      ->capture_default_str();
  auto* seed_opt =
      app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--threads", threads,
                 "Worker threads for trajectory ensembles")
      ->capture_default_str();

  auto* sc_spectrum = app.add_subcommand(
      "spectrum",
      "Diagonalize the model Liouvillian; write spectrum.json and "
      "quasiprobability snapshot CSVs");
  auto* sc_trajectory = app.add_subcommand(
      "trajectory",
      "Run a trajectory ensemble; stream per-sample observables to "
      "trajectories.jsonl and write ensemble_summary.json");
  auto* sc_sweep = app.add_subcommand(
      "sweep",
      "Run a resumable two-parameter sweep; write per-cell JSON, "
      "heatmap.csv, scatter.csv and sweep_summary.json");
  auto* sc_validate = app.add_subcommand(
      "validate",
      "Run the internal validation suite and write validation_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sc_validate->parsed()) return cmd_validate(out_dir);

    Json cfg_json;
    if (!preset.empty() && !config_path.empty())
      throw std::invalid_argument("use either --config or --preset, not both");
    if (!preset.empty())
      cfg_json = preset_config(preset);
    else if (!config_path.empty())
      cfg_json = load_json_file(config_path);
    else
      throw std::invalid_argument("need --config or --preset");
    if (seed_opt->count() > 0) cfg_json["seed"] = seed;
    const ExperimentConfig cfg = parse_config(cfg_json);

    if (sc_spectrum->parsed()) return cmd_spectrum(cfg, out_dir, threads);
    if (sc_trajectory->parsed()) return cmd_trajectory(cfg, out_dir, threads);
    if (sc_sweep->parsed()) return cmd_sweep(cfg, out_dir, threads);
    throw std::invalid_argument("no subcommand selected");
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
