#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liouvtraj/io.hpp"
#include "liouvtraj/models.hpp"
#include "liouvtraj/observables.hpp"
#include "liouvtraj/trajectory.hpp"

namespace liouvtraj {

// Initial-state selection.  For "random" an explicit seed pins the state;
// otherwise the state seed is derived from (master seed, cell index, 0).
struct InitialStateSpec {
  std::string type = "random";  // random | coherent | bec | file
  std::optional<std::uint64_t> seed;
  double scale = 3.0;           // coherent-state scale factor
  std::string path;             // "file": JSON array of [re, im] pairs
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string model = "xxz";
  Json params = Json::object();      // model parameter block, field-for-field
  InitialStateSpec initial_state;
  int trajectories = 100;
  TrajectoryConfig trajectory;       // .seed unused here (master seed below)
  std::uint64_t seed = 12345;        // master seed for the splitting rule
  std::vector<double> snapshot_times;
  std::optional<SweepAxis> sweep_param1;
  std::optional<SweepAxis> sweep_param2;
  bool dump_eigenoperators = false;
};

// Parses a config document; throws std::invalid_argument naming the
// offending field on any violation (unknown keys included).
ExperimentConfig parse_config(const Json& j);
// Canonical full-document serialization (defaults materialized).
Json config_to_json(const ExperimentConfig& c);
std::uint64_t config_hash(const ExperimentConfig& c);

// Built-in experiment presets addressable from the CLI.
Json preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct ModelBundle {
  std::string model;
  Json params;  // canonical parameter block actually used
  BasisSpec basis;
  LindbladSpec spec;
};
// Builds a model from its JSON parameter block (unknown/ill-typed parameter
// names throw with the field name in the message).
ModelBundle build_model(const std::string& model, const Json& params);

Vector build_initial_state(const ExperimentConfig& cfg, const ModelBundle& mb,
                           std::uint64_t derived_seed);

struct TrajectoryResult {
  std::uint64_t seed = 0;
  double t_ss = 0.0;
  bool converged = false;
  double cm = 0.0;
  double ipr = 0.0;
  Complex p0{0.0, 0.0};
  long n_jumps = 0;
};

struct CellRecord {
  long i = 0, j = 0;      // grid coordinates
  double v1 = 0.0, v2 = 0.0;  // swept parameter values
  double p_ss = 0.0;      // steady-state purity from exact diagonalization
  std::vector<TrajectoryResult> per_traj;
  double mean_cm = 0.0, std_cm = 0.0;
  double mean_ipr = 0.0, std_ipr = 0.0;
  double mean_p0_re = 0.0, mean_p0_im = 0.0;
  BoundReport bound;
  long n_not_converged = 0;
};

// Runs the M-trajectory steady-state ensemble for one parameter point.
CellRecord run_cell(const ExperimentConfig& cfg, const Json& cell_params,
                    long i, long j, double v1, double v2, long cell_index,
                    int threads);

struct SweepOutput {
  std::vector<CellRecord> cells;
  double spearman_cm_pss = 0.0;
  double spearman_ipr_pss = 0.0;
};

// Full grid sweep with per-cell persistence in out_dir (resumable: cells
// whose JSON exists with a matching config hash and replayable aggregates
// are reused).  Pass an empty out_dir to skip persistence.
SweepOutput run_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                      int threads, std::ostream* progress = nullptr);

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// CLI entry points; return a process exit code.
int cmd_spectrum(const ExperimentConfig& cfg, const std::string& out_dir,
                 int threads);
int cmd_trajectory(const ExperimentConfig& cfg, const std::string& out_dir,
                   int threads);
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
              int threads);
int cmd_validate(const std::string& out_dir);

}  // namespace liouvtraj
