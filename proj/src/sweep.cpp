#include "liouvtraj/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

namespace liouvtraj {

namespace {

void check_keys(const Json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  require(j.is_object(), where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    require(known, where + ": unknown field '" + it.key() + "'");
  }
}

double jget_num(const Json& j, const char* key, double def,
                const std::string& where) {
  if (!j.contains(key)) return def;
  require(j.at(key).is_number(), where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

int jget_int(const Json& j, const char* key, int def,
             const std::string& where) {
  if (!j.contains(key)) return def;
  require(j.at(key).is_number_integer(),
          where + "." + key + " must be an integer");
  return j.at(key).get<int>();
}

std::uint64_t jget_u64(const Json& j, const char* key, std::uint64_t def,
                       const std::string& where) {
  if (!j.contains(key)) return def;
  const Json& v = j.at(key);
  require(v.is_number_integer() && (v.is_number_unsigned() ||
                                    v.get<std::int64_t>() >= 0),
          where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool jget_bool(const Json& j, const char* key, bool def,
               const std::string& where) {
  if (!j.contains(key)) return def;
  require(j.at(key).is_boolean(), where + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

std::string jget_str(const Json& j, const char* key, const std::string& def,
                     const std::string& where) {
  if (!j.contains(key)) return def;
  require(j.at(key).is_string(), where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

// Runs fn(0..n-1) on up to `threads` workers; exceptions are captured and
// rethrown on the caller thread.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// --- model parameter blocks -------------------------------------------------

XxzParams parse_xxz_params(const Json& p) {
  check_keys(p, "params", {"N", "J", "Delta", "Jprime", "gamma_l_plus",
                           "gamma_r_minus"});
  XxzParams x;
  x.N = jget_int(p, "N", x.N, "params");
  x.J = jget_num(p, "J", x.J, "params");
  x.Delta = jget_num(p, "Delta", x.Delta, "params");
  x.Jprime = jget_num(p, "Jprime", x.Jprime, "params");
  x.gamma_l_plus = jget_num(p, "gamma_l_plus", x.gamma_l_plus, "params");
  x.gamma_r_minus = jget_num(p, "gamma_r_minus", x.gamma_r_minus, "params");
  return x;
}

Json xxz_params_json(const XxzParams& x) {
  return {{"N", x.N},
          {"J", x.J},
          {"Delta", x.Delta},
          {"Jprime", x.Jprime},
          {"gamma_l_plus", x.gamma_l_plus},
          {"gamma_r_minus", x.gamma_r_minus}};
}

BhDimerParams parse_dimer_params(const Json& p) {
  check_keys(p, "params", {"J", "U", "Delta", "F", "gamma", "N_c"});
  BhDimerParams x;
  x.J = jget_num(p, "J", x.J, "params");
  x.U = jget_num(p, "U", x.U, "params");
  x.Delta = jget_num(p, "Delta", x.Delta, "params");
  x.F = jget_num(p, "F", x.F, "params");
  x.gamma = jget_num(p, "gamma", x.gamma, "params");
  x.N_c = jget_int(p, "N_c", x.N_c, "params");
  return x;
}

Json dimer_params_json(const BhDimerParams& x) {
  return {{"J", x.J},     {"U", x.U},         {"Delta", x.Delta},
          {"F", x.F},     {"gamma", x.gamma}, {"N_c", x.N_c}};
}

BhChainParams parse_chain_params(const Json& p) {
  check_keys(p, "params", {"N", "J", "U", "gamma", "N_b"});
  BhChainParams x;
  x.N = jget_int(p, "N", x.N, "params");
  x.J = jget_num(p, "J", x.J, "params");
  x.U = jget_num(p, "U", x.U, "params");
  x.gamma = jget_num(p, "gamma", x.gamma, "params");
  x.N_b = jget_int(p, "N_b", x.N_b, "params");
  return x;
}

Json chain_params_json(const BhChainParams& x) {
  return {{"N", x.N},
          {"J", x.J},
          {"U", x.U},
          {"gamma", x.gamma},
          {"N_b", x.N_b}};
}

SweepAxis parse_axis(const Json& j, const std::string& where) {
  check_keys(j, where, {"name", "values", "min", "max", "count"});
  SweepAxis ax;
  ax.name = jget_str(j, "name", "", where);
  require(!ax.name.empty(), where + ".name is required");
  if (j.contains("values")) {
    require(j.at("values").is_array() && !j.at("values").empty(),
            where + ".values must be a non-empty array");
    for (const auto& v : j.at("values")) {
      require(v.is_number(), where + ".values must contain numbers");
      ax.values.push_back(v.get<double>());
    }
  } else {
    require(j.contains("min") && j.contains("max"),
            where + ": provide either values or min/max");
    const double lo = jget_num(j, "min", 0.0, where);
    const double hi = jget_num(j, "max", 0.0, where);
    const int count = jget_int(j, "count", 9, where);
    require(count >= 1, where + ".count must be >= 1");
    for (int i = 0; i < count; ++i) {
      ax.values.push_back(count == 1
                              ? lo
                              : lo + (hi - lo) * i / (count - 1.0));
    }
  }
  return ax;
}

// --- per-cell aggregation and (de)serialization -----------------------------

void compute_aggregates(CellRecord& rec) {
  const double m = static_cast<double>(rec.per_traj.size());
  double sum_cm = 0.0, sum_ipr = 0.0, sum_p0r = 0.0, sum_p0i = 0.0;
  rec.n_not_converged = 0;
  for (const auto& r : rec.per_traj) {
    sum_cm += r.cm;
    sum_ipr += r.ipr;
    sum_p0r += r.p0.real();
    sum_p0i += r.p0.imag();
    if (!r.converged) ++rec.n_not_converged;
  }
  rec.mean_cm = sum_cm / m;
  rec.mean_ipr = sum_ipr / m;
  rec.mean_p0_re = sum_p0r / m;
  rec.mean_p0_im = sum_p0i / m;
  double var_cm = 0.0, var_ipr = 0.0;
  for (const auto& r : rec.per_traj) {
    var_cm += (r.cm - rec.mean_cm) * (r.cm - rec.mean_cm);
    var_ipr += (r.ipr - rec.mean_ipr) * (r.ipr - rec.mean_ipr);
  }
  const double denom = rec.per_traj.size() > 1 ? m - 1.0 : 1.0;
  rec.std_cm = std::sqrt(var_cm / denom);
  rec.std_ipr = std::sqrt(var_ipr / denom);
  std::vector<double> p0_re, ipr_vals;
  p0_re.reserve(rec.per_traj.size());
  ipr_vals.reserve(rec.per_traj.size());
  for (const auto& r : rec.per_traj) {
    p0_re.push_back(r.p0.real());
    ipr_vals.push_back(r.ipr);
  }
  rec.bound = bound_check(p0_re, ipr_vals, rec.p_ss);
}

Json bound_to_json(const BoundReport& b) {
  return {{"p_ss", b.p_ss},           {"mean_p0", b.mean_p0},
          {"se_p0", b.se_p0},         {"mean_ipr", b.mean_ipr},
          {"se_ipr", b.se_ipr},       {"p0_margin", b.p0_margin},
          {"ipr_margin", b.ipr_margin}, {"p0_matches", b.p0_matches},
          {"ipr_bound_ok", b.ipr_bound_ok}};
}

Json cell_to_json(const CellRecord& rec, const SweepAxis& ax1,
                  const SweepAxis& ax2, std::uint64_t hash,
                  const std::string& started, const std::string& finished) {
  Json per = Json::array();
  for (std::size_t m = 0; m < rec.per_traj.size(); ++m) {
    const auto& r = rec.per_traj[m];
    per.push_back({{"m", m},
                   {"seed", r.seed},
                   {"t_ss", r.t_ss},
                   {"converged", r.converged},
                   {"cm", r.cm},
                   {"ipr", r.ipr},
                   {"p0_re", r.p0.real()},
                   {"p0_im", r.p0.imag()},
                   {"n_jumps", r.n_jumps}});
  }
  Json j;
  j["cell"] = {rec.i, rec.j};
  j["param1"] = {{"name", ax1.name}, {"value", rec.v1}};
  j["param2"] = {{"name", ax2.name}, {"value", rec.v2}};
  j["config_hash"] = hash;
  j["code_version"] = kCodeVersion;
  j["prng"] = kPrngAlgorithm;
  j["started"] = started;
  j["finished"] = finished;
  j["p_ss"] = rec.p_ss;
  j["per_trajectory"] = std::move(per);
  j["aggregates"] = {{"mean_cm", rec.mean_cm},     {"std_cm", rec.std_cm},
                     {"mean_ipr", rec.mean_ipr},   {"std_ipr", rec.std_ipr},
                     {"mean_p0_re", rec.mean_p0_re},
                     {"mean_p0_im", rec.mean_p0_im},
                     {"n_not_converged", rec.n_not_converged}};
  j["bound"] = bound_to_json(rec.bound);
  return j;
}

CellRecord cell_from_json(const Json& j) {
  CellRecord rec;
  rec.i = j.at("cell").at(0).get<long>();
  rec.j = j.at("cell").at(1).get<long>();
  rec.v1 = j.at("param1").at("value").get<double>();
  rec.v2 = j.at("param2").at("value").get<double>();
  rec.p_ss = j.at("p_ss").get<double>();
  for (const auto& r : j.at("per_trajectory")) {
    TrajectoryResult t;
    t.seed = r.at("seed").get<std::uint64_t>();
    t.t_ss = r.at("t_ss").get<double>();
    t.converged = r.at("converged").get<bool>();
    t.cm = r.at("cm").get<double>();
    t.ipr = r.at("ipr").get<double>();
    t.p0 = Complex{r.at("p0_re").get<double>(), r.at("p0_im").get<double>()};
    t.n_jumps = r.at("n_jumps").get<long>();
    rec.per_traj.push_back(t);
  }
  compute_aggregates(rec);
  // Replay check: stored aggregates must equal recomputation bit-for-bit.
  const auto& agg = j.at("aggregates");
  ensure(agg.at("mean_cm").get<double>() == rec.mean_cm &&
             agg.at("std_cm").get<double>() == rec.std_cm &&
             agg.at("mean_ipr").get<double>() == rec.mean_ipr &&
             agg.at("std_ipr").get<double>() == rec.std_ipr,
         "cell record aggregates do not replay from per-trajectory entries");
  return rec;
}

std::string cell_file_name(long i, long j) {
  return "cell_" + std::to_string(i) + "_" + std::to_string(j) + ".json";
}

}  // namespace

// --- config -----------------------------------------------------------------

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, "config",
             {"model", "params", "initial_state", "trajectories", "trajectory",
              "seed", "snapshot_times", "sweep", "dump_eigenoperators"});
  ExperimentConfig c;
  c.model = jget_str(j, "model", "", "config");
  require(c.model == "xxz" || c.model == "bh_dimer" || c.model == "bh_chain",
          "config.model must be one of xxz | bh_dimer | bh_chain");
  c.params = j.value("params", Json::object());
  if (j.contains("initial_state")) {
    const Json& is = j.at("initial_state");
    check_keys(is, "config.initial_state", {"type", "seed", "scale", "path"});
    c.initial_state.type = jget_str(is, "type", "random",
                                    "config.initial_state");
    require(c.initial_state.type == "random" ||
                c.initial_state.type == "coherent" ||
                c.initial_state.type == "bec" ||
                c.initial_state.type == "file",
            "config.initial_state.type must be one of "
            "random | coherent | bec | file");
    if (is.contains("seed") && !is.at("seed").is_null())
      c.initial_state.seed =
          jget_u64(is, "seed", 0, "config.initial_state");
    c.initial_state.scale =
        jget_num(is, "scale", 3.0, "config.initial_state");
    c.initial_state.path = jget_str(is, "path", "", "config.initial_state");
    require(c.initial_state.type != "file" || !c.initial_state.path.empty(),
            "config.initial_state.path is required for type 'file'");
    if (c.initial_state.type == "file")
      require(std::filesystem::exists(c.initial_state.path),
              "config.initial_state.path does not exist: " +
                  c.initial_state.path);
  }
  c.trajectories = jget_int(j, "trajectories", 100, "config");
  require(c.trajectories >= 1, "config.trajectories must be >= 1");
  if (j.contains("trajectory")) {
    const Json& t = j.at("trajectory");
    check_keys(t, "config.trajectory",
               {"dt", "t_max", "sample_stride", "window_short", "window_long",
                "delta_p_max", "rms_mode"});
    c.trajectory.dt = jget_num(t, "dt", c.trajectory.dt, "config.trajectory");
    require(c.trajectory.dt > 0.0, "config.trajectory.dt must be positive");
    c.trajectory.t_max =
        jget_num(t, "t_max", c.trajectory.t_max, "config.trajectory");
    require(c.trajectory.t_max > 0.0,
            "config.trajectory.t_max must be positive");
    c.trajectory.sample_stride = jget_int(t, "sample_stride",
                                          c.trajectory.sample_stride,
                                          "config.trajectory");
    require(c.trajectory.sample_stride >= 1,
            "config.trajectory.sample_stride must be >= 1");
    c.trajectory.window_short = jget_int(t, "window_short",
                                         c.trajectory.window_short,
                                         "config.trajectory");
    c.trajectory.window_long = jget_int(t, "window_long",
                                        c.trajectory.window_long,
                                        "config.trajectory");
    require(c.trajectory.window_short >= 2 &&
                c.trajectory.window_long > c.trajectory.window_short,
            "config.trajectory: need window_long > window_short >= 2");
    c.trajectory.delta_p_max = jget_num(t, "delta_p_max",
                                        c.trajectory.delta_p_max,
                                        "config.trajectory");
    const std::string rms =
        jget_str(t, "rms_mode", "mean", "config.trajectory");
    require(rms == "mean" || rms == "sum",
            "config.trajectory.rms_mode must be 'mean' or 'sum'");
    c.trajectory.rms_mode = rms == "mean" ? RmsMode::Mean : RmsMode::Sum;
  }
  c.seed = jget_u64(j, "seed", c.seed, "config");
  if (j.contains("snapshot_times")) {
    require(j.at("snapshot_times").is_array(),
            "config.snapshot_times must be an array");
    for (const auto& v : j.at("snapshot_times")) {
      require(v.is_number() && v.get<double>() >= 0.0,
              "config.snapshot_times entries must be non-negative numbers");
      c.snapshot_times.push_back(v.get<double>());
    }
  }
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    check_keys(s, "config.sweep", {"param1", "param2"});
    require(s.contains("param1") && s.contains("param2"),
            "config.sweep needs param1 and param2");
    c.sweep_param1 = parse_axis(s.at("param1"), "config.sweep.param1");
    c.sweep_param2 = parse_axis(s.at("param2"), "config.sweep.param2");
  }
  c.dump_eigenoperators =
      jget_bool(j, "dump_eigenoperators", false, "config");
  // Validate the model parameter block eagerly so bad configs fail fast.
  build_model(c.model, c.params);
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  const ModelBundle mb = build_model(c.model, c.params);
  Json j;
  j["model"] = c.model;
  j["params"] = mb.params;
  Json is;
  is["type"] = c.initial_state.type;
  if (c.initial_state.seed)
    is["seed"] = *c.initial_state.seed;
  else
    is["seed"] = nullptr;
  is["scale"] = c.initial_state.scale;
  is["path"] = c.initial_state.path;
  j["initial_state"] = std::move(is);
  j["trajectories"] = c.trajectories;
  j["trajectory"] = {
      {"dt", c.trajectory.dt},
      {"t_max", c.trajectory.t_max},
      {"sample_stride", c.trajectory.sample_stride},
      {"window_short", c.trajectory.window_short},
      {"window_long", c.trajectory.window_long},
      {"delta_p_max", c.trajectory.delta_p_max},
      {"rms_mode", c.trajectory.rms_mode == RmsMode::Mean ? "mean" : "sum"}};
  j["seed"] = c.seed;
  j["snapshot_times"] = c.snapshot_times;
  if (c.sweep_param1 && c.sweep_param2) {
    j["sweep"] = {
        {"param1",
         {{"name", c.sweep_param1->name}, {"values", c.sweep_param1->values}}},
        {"param2",
         {{"name", c.sweep_param2->name}, {"values", c.sweep_param2->values}}}};
  }
  j["dump_eigenoperators"] = c.dump_eigenoperators;
  return j;
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  return fnv1a64(config_to_json(c).dump());
}

// --- presets ----------------------------------------------------------------

namespace {

// The convergence windows are counted in samples, so sample_stride sets the
// physical span they cover.  Presets pick a stride that makes the long window
// span several relaxation times of the model (measured from the Liouvillian
// gap); with too fine a cadence the window rule fires mid-transient.
Json base_trajectory_block(double t_max, int stride) {
  return {{"dt", 1e-3},        {"t_max", t_max},    {"sample_stride", stride},
          {"window_short", 20}, {"window_long", 50}, {"delta_p_max", 0.1},
          {"rms_mode", "mean"}};
}

}  // namespace

Json preset_config(const std::string& name) {
  Json j;
  if (name == "xxz_localized" || name == "xxz_delocalized") {
    j["model"] = "xxz";
    j["params"] = {{"N", 4},        {"J", 1.0},
                   {"Delta", 0.7},  {"Jprime", name == "xxz_localized" ? 2.0
                                                                       : 0.5},
                   {"gamma_l_plus", 0.6}, {"gamma_r_minus", 1.4}};
    j["initial_state"] = {{"type", "random"}};
    j["trajectories"] = 100;
    j["trajectory"] = base_trajectory_block(120.0, 1000);
    j["snapshot_times"] = {0.5, 2.0, 10.0};
    j["seed"] = 20260823;
  } else if (name == "bh_dimer_near" || name == "bh_dimer_far") {
    j["model"] = "bh_dimer";
    j["params"] = {{"J", 2.0}, {"U", 1.0},
                   {"Delta", name == "bh_dimer_near" ? 2.5 : 8.0},
                   {"F", 3.0}, {"gamma", 1.0}, {"N_c", 3}};
    j["initial_state"] = {{"type", "coherent"}, {"scale", 3.0}};
    j["trajectories"] = 100;
    j["trajectory"] = base_trajectory_block(30.0, 100);
    j["snapshot_times"] = {1.0, 5.0};
    j["seed"] = 20260823;
  } else if (name == "bh_chain_u0" || name == "bh_chain_u10") {
    j["model"] = "bh_chain";
    j["params"] = {{"N", 4},
                   {"J", 1.0},
                   {"U", name == "bh_chain_u0" ? 0.0 : 10.0},
                   {"gamma", 1.0},
                   {"N_b", 3}};
    j["initial_state"] = {{"type", "random"}};
    j["trajectories"] = 20;
    j["trajectory"] = base_trajectory_block(150.0, 100);
    j["snapshot_times"] = Json::array();
    j["seed"] = 20260823;
  } else if (name == "xxz_sweep") {
    j["model"] = "xxz";
    j["params"] = {{"N", 4},        {"J", 1.0},       {"Delta", 0.7},
                   {"Jprime", 2.0}, {"gamma_l_plus", 0.6},
                   {"gamma_r_minus", 1.4}};
    j["initial_state"] = {{"type", "random"}};
    j["trajectories"] = 100;
    j["trajectory"] = base_trajectory_block(120.0, 1000);
    j["seed"] = 20260823;
    j["sweep"] = {
        {"param1", {{"name", "Jprime"}, {"min", -2.0}, {"max", 2.0},
                    {"count", 5}}},
        {"param2", {{"name", "Delta"}, {"min", -2.0}, {"max", 2.0},
                    {"count", 5}}}};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += " " + n;
    throw std::invalid_argument("unknown preset '" + name + "'; available:" +
                                known);
  }
  return j;
}

std::vector<std::string> preset_names() {
  return {"xxz_localized", "xxz_delocalized", "bh_dimer_near",
          "bh_dimer_far",  "bh_chain_u0",     "bh_chain_u10",
          "xxz_sweep"};
}

// --- model/dispatch ---------------------------------------------------------

ModelBundle build_model(const std::string& model, const Json& params) {
  if (model == "xxz") {
    const XxzParams p = parse_xxz_params(params);
    return ModelBundle{model, xxz_params_json(p), xxz_basis(p), xxz_model(p)};
  }
  if (model == "bh_dimer") {
    const BhDimerParams p = parse_dimer_params(params);
    return ModelBundle{model, dimer_params_json(p), bh_dimer_basis(p),
                       bh_dimer_model(p)};
  }
  if (model == "bh_chain") {
    const BhChainParams p = parse_chain_params(params);
    return ModelBundle{model, chain_params_json(p), bh_chain_basis(p),
                       bh_chain_model(p)};
  }
  throw std::invalid_argument("unknown model '" + model + "'");
}

Vector build_initial_state(const ExperimentConfig& cfg, const ModelBundle& mb,
                           std::uint64_t derived_seed) {
  const auto& is = cfg.initial_state;
  if (is.type == "random") {
    return random_initial_state(mb.basis,
                                is.seed ? *is.seed : derived_seed);
  }
  if (is.type == "coherent") {
    require(mb.model == "bh_dimer",
            "initial_state 'coherent' requires the bh_dimer model");
    return coherent_initial_dimer(parse_dimer_params(mb.params), is.scale);
  }
  if (is.type == "bec") {
    require(mb.model == "bh_chain",
            "initial_state 'bec' requires the bh_chain model");
    const BhChainParams p = parse_chain_params(mb.params);
    return bec_state(p.N, p.N_b);
  }
  // type == "file"
  const Json arr = load_json_file(is.path);
  require(arr.is_array() &&
              static_cast<long>(arr.size()) == mb.basis.dimension(),
          "initial_state file must hold " +
              std::to_string(mb.basis.dimension()) + " [re, im] pairs");
  Vector psi(mb.basis.dimension());
  for (long k = 0; k < mb.basis.dimension(); ++k) {
    const Json& e = arr.at(k);
    require(e.is_array() && e.size() == 2 && e.at(0).is_number() &&
                e.at(1).is_number(),
            "initial_state file entries must be [re, im] pairs");
    psi(k) = Complex{e.at(0).get<double>(), e.at(1).get<double>()};
  }
  const double norm = psi.norm();
  require(norm > 0.0, "initial_state file holds a zero vector");
  return psi / norm;
}

// --- sweep ------------------------------------------------------------------

CellRecord run_cell(const ExperimentConfig& cfg, const Json& cell_params,
                    long i, long j, double v1, double v2, long cell_index,
                    int threads) {
  const ModelBundle mb = build_model(cfg.model, cell_params);
  const SpectralData sd = diagonalize(build_superoperator(mb.spec));
  const Matrix rho_ss = steady_state(sd);
  const double p_ss = (rho_ss * rho_ss).trace().real();
  const Vector psi0 =
      build_initial_state(cfg, mb, derive_seed(cfg.seed, cell_index, 0));
  CellRecord rec;
  rec.i = i;
  rec.j = j;
  rec.v1 = v1;
  rec.v2 = v2;
  rec.p_ss = p_ss;
  rec.per_traj.resize(cfg.trajectories);
  parallel_for(cfg.trajectories, threads, [&](int m) {
    TrajectoryConfig tc = cfg.trajectory;
    tc.seed = derive_seed(cfg.seed, cell_index, static_cast<std::uint64_t>(m) + 1);
    const ConvergenceResult res = converged_steady_sample(
        psi0, mb.spec, tc,
        [&](const TrajectoryState& st) { return sampled_cm(sd, st.psi); });
    const Matrix rho = res.state.psi * res.state.psi.adjoint();
    const QuasiDistribution q = quasiprobabilities(overlaps(sd, rho), sd);
    TrajectoryResult& out = rec.per_traj[m];
    out.seed = tc.seed;
    out.t_ss = res.t_ss;
    out.converged = res.converged;
    out.cm = q.cm;
    out.ipr = q.ipr;
    out.p0 = q.p0;
    out.n_jumps = static_cast<long>(res.state.jumps.size());
  });
  compute_aggregates(rec);
  return rec;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2,
          "spearman: need two equal-length series of size >= 2");
  const auto ranks = [](const std::vector<double>& v) {
    const long n = static_cast<long>(v.size());
    std::vector<long> idx(n);
    std::iota(idx.begin(), idx.end(), 0L);
    std::sort(idx.begin(), idx.end(),
              [&](long a, long b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    long k = 0;
    while (k < n) {
      long e = k;
      while (e + 1 < n && v[idx[e + 1]] == v[idx[k]]) ++e;
      const double avg = 0.5 * (k + e) + 1.0;  // average 1-based rank
      for (long t = k; t <= e; ++t) r[idx[t]] = avg;
      k = e + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const long n = static_cast<long>(x.size());
  double mx = 0.0, my = 0.0;
  for (long i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (long i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

SweepOutput run_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                      int threads, std::ostream* progress) {
  require(cfg.sweep_param1 && cfg.sweep_param2,
          "run_sweep: config has no sweep block");
  const SweepAxis& ax1 = *cfg.sweep_param1;
  const SweepAxis& ax2 = *cfg.sweep_param2;
  const std::uint64_t hash = config_hash(cfg);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  SweepOutput out;
  std::vector<std::string> failures;
  const long n1 = static_cast<long>(ax1.values.size());
  const long n2 = static_cast<long>(ax2.values.size());
  for (long i = 0; i < n1; ++i) {
    for (long j = 0; j < n2; ++j) {
      const long cell_index = i * n2 + j;
      const double v1 = ax1.values[i];
      const double v2 = ax2.values[j];
      const std::string path =
          out_dir.empty() ? "" : out_dir + "/" + cell_file_name(i, j);
      bool reused = false;
      if (!path.empty() && std::filesystem::exists(path)) {
        try {
          const Json stored = load_json_file(path);
          if (stored.at("config_hash").get<std::uint64_t>() == hash) {
            out.cells.push_back(cell_from_json(stored));
            reused = true;
          }
        } catch (const std::exception&) {
          reused = false;  // stale or corrupt: recompute below
        }
      }
      if (!reused) {
        Json cell_params = cfg.params;
        cell_params[ax1.name] = v1;
        cell_params[ax2.name] = v2;
        const std::string started = utc_timestamp();
        try {
          CellRecord rec =
              run_cell(cfg, cell_params, i, j, v1, v2, cell_index, threads);
          if (!path.empty())
            save_json_file(path, cell_to_json(rec, ax1, ax2, hash, started,
                                              utc_timestamp()));
          out.cells.push_back(std::move(rec));
        } catch (const std::exception& e) {
          failures.push_back(cell_file_name(i, j) + ": " + e.what());
          if (!out_dir.empty()) {
            save_json_file(out_dir + "/cell_" + std::to_string(i) + "_" +
                               std::to_string(j) + ".error.json",
                           Json{{"cell", {i, j}},
                                {"param1", v1},
                                {"param2", v2},
                                {"error", e.what()},
                                {"time", utc_timestamp()}});
          }
          continue;
        }
      }
      if (progress) {
        const CellRecord& r = out.cells.back();
        *progress << "cell (" << i << "," << j << ") " << ax1.name << "="
                  << v1 << " " << ax2.name << "=" << v2
                  << (reused ? " [cached]" : "") << "  P_ss=" << r.p_ss
                  << " mean_cm=" << r.mean_cm << " mean_ipr=" << r.mean_ipr
                  << "\n";
      }
    }
  }

  std::vector<double> pss, cms, iprs;
  for (const auto& c : out.cells) {
    pss.push_back(c.p_ss);
    cms.push_back(c.mean_cm);
    iprs.push_back(c.mean_ipr);
  }
  if (pss.size() >= 2) {
    out.spearman_cm_pss = spearman(cms, pss);
    out.spearman_ipr_pss = spearman(iprs, pss);
  } else {
    out.spearman_cm_pss = out.spearman_ipr_pss =
        std::numeric_limits<double>::quiet_NaN();
  }

  if (!out_dir.empty()) {
    std::string heat = "param1,param2,P_ss,mean_cm,std_cm,mean_ipr,std_ipr\n";
    std::string scatter = "P_ss,cm,ipr,cm_err,ipr_err\n";
    for (const auto& c : out.cells) {
      heat += format_float(c.v1) + "," + format_float(c.v2) + "," +
              format_float(c.p_ss) + "," + format_float(c.mean_cm) + "," +
              format_float(c.std_cm) + "," + format_float(c.mean_ipr) + "," +
              format_float(c.std_ipr) + "\n";
      scatter += format_float(c.p_ss) + "," + format_float(c.mean_cm) + "," +
                 format_float(c.mean_ipr) + "," + format_float(c.std_cm) +
                 "," + format_float(c.std_ipr) + "\n";
    }
    write_text_file(out_dir + "/heatmap.csv", heat);
    write_text_file(out_dir + "/scatter.csv", scatter);
    Json summary;
    summary["config"] = config_to_json(cfg);
    summary["config_hash"] = hash;
    summary["code_version"] = kCodeVersion;
    summary["prng"] = kPrngAlgorithm;
    summary["n_cells"] = out.cells.size();
    summary["spearman_cm_pss"] = out.spearman_cm_pss;
    summary["spearman_ipr_pss"] = out.spearman_ipr_pss;
    summary["failures"] = failures;
    summary["finished"] = utc_timestamp();
    save_json_file(out_dir + "/sweep_summary.json", summary);
  }
  return out;
}

// --- CLI commands -----------------------------------------------------------

int cmd_spectrum(const ExperimentConfig& cfg, const std::string& out_dir,
                 int threads) {
  (void)threads;
  const ModelBundle mb = build_model(cfg.model, cfg.params);
  const SpectralData sd = diagonalize(build_superoperator(mb.spec));
  const Matrix rho_ss = steady_state(sd);

  Json spec_json = spectrum_to_json(sd);
  spec_json["config"] = config_to_json(cfg);
  spec_json["config_hash"] = config_hash(cfg);
  spec_json["code_version"] = kCodeVersion;
  spec_json["prng"] = kPrngAlgorithm;
  spec_json["steady_purity"] = (rho_ss * rho_ss).trace().real();
  save_json_file(out_dir + "/spectrum.json", spec_json);
  if (cfg.dump_eigenoperators)
    write_eigenoperator_blobs(out_dir, "eigenops", sd);

  const Vector psi0 = build_initial_state(cfg, mb, derive_seed(cfg.seed, 0, 0));

  // Quasiprobability snapshots along a single trajectory (t=0 always).
  std::vector<double> times = cfg.snapshot_times;
  times.push_back(0.0);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<long> target_steps;
  for (double t : times)
    target_steps.push_back(std::llround(t / cfg.trajectory.dt));

  Json index = Json::array();
  TrajectoryConfig tc = cfg.trajectory;
  tc.seed = derive_seed(cfg.seed, 0, 1);
  const TrajectoryEngine engine(mb.spec, tc);
  TrajectoryState st = engine.make_state(psi0, tc.seed);
  std::size_t next = 0;
  char namebuf[64];
  for (long step = 0; next < target_steps.size(); ++step) {
    if (step > 0) engine.step(st);
    if (step < target_steps[next]) continue;
    const QuasiDistribution q = quasiprobabilities(
        overlaps(sd, st.psi * st.psi.adjoint()), sd);
    std::snprintf(namebuf, sizeof(namebuf), "quasiprob_%03zu.csv", next);
    write_text_file(out_dir + "/" + namebuf, quasiprob_csv(sd, q.p));
    index.push_back({{"index", next},
                     {"t", st.t},
                     {"file", namebuf},
                     {"cm", q.cm},
                     {"ipr", q.ipr},
                     {"sum_p_re", q.p.sum().real()},
                     {"purity", q.purity_input}});
    ++next;
  }
  save_json_file(out_dir + "/snapshots.json", index);
  return 0;
}

int cmd_trajectory(const ExperimentConfig& cfg, const std::string& out_dir,
                   int threads) {
  (void)threads;  // JSONL stream is written in trajectory order
  const ModelBundle mb = build_model(cfg.model, cfg.params);
  const SpectralData sd = diagonalize(build_superoperator(mb.spec));
  const Vector psi0 = build_initial_state(cfg, mb, derive_seed(cfg.seed, 0, 0));

  std::filesystem::create_directories(out_dir);
  std::ofstream log(out_dir + "/trajectories.jsonl",
                    std::ios::binary | std::ios::trunc);
  ensure(log.good(), "cannot open trajectories.jsonl");

  const long n_samples =
      std::llround(cfg.trajectory.t_max / cfg.trajectory.dt) /
          cfg.trajectory.sample_stride +
      1;
  std::vector<double> sum_cm(n_samples, 0.0), sum_cm2(n_samples, 0.0);
  std::vector<double> sum_ipr(n_samples, 0.0), sum_ipr2(n_samples, 0.0);
  std::vector<double> times(n_samples, 0.0);
  Json n_jumps = Json::array();

  for (int m = 0; m < cfg.trajectories; ++m) {
    TrajectoryConfig tc = cfg.trajectory;
    tc.seed = derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(m) + 1);
    long s = 0;
    long total_jumps = 0;
    evolve_sampled(psi0, mb.spec, tc, [&](const TrajectoryState& st) {
      const SampleObservables obs = sampled_observables(sd, st.psi);
      Json line{{"m", m},
                {"t", st.t},
                {"cm", obs.cm},
                {"ipr", obs.ipr},
                {"p0_re", obs.p0.real()},
                {"p0_im", obs.p0.imag()},
                {"jumps_so_far", st.jumps.size()}};
      log << line.dump() << "\n";
      times[s] = st.t;
      sum_cm[s] += obs.cm;
      sum_cm2[s] += obs.cm * obs.cm;
      sum_ipr[s] += obs.ipr;
      sum_ipr2[s] += obs.ipr * obs.ipr;
      total_jumps = static_cast<long>(st.jumps.size());
      ++s;
    });
    ensure(s == n_samples, "cmd_trajectory: sample count mismatch");
    n_jumps.push_back(total_jumps);
  }
  log.flush();
  ensure(log.good(), "write failed: trajectories.jsonl");

  const double m = cfg.trajectories;
  Json samples = Json::array();
  for (long s = 0; s < n_samples; ++s) {
    const double mean_cm = sum_cm[s] / m;
    const double mean_ipr = sum_ipr[s] / m;
    const double var_cm =
        std::max(0.0, sum_cm2[s] / m - mean_cm * mean_cm);
    const double var_ipr =
        std::max(0.0, sum_ipr2[s] / m - mean_ipr * mean_ipr);
    const double bessel = cfg.trajectories > 1 ? m / (m - 1.0) : 1.0;
    samples.push_back({{"t", times[s]},
                       {"mean_cm", mean_cm},
                       {"std_cm", std::sqrt(var_cm * bessel)},
                       {"mean_ipr", mean_ipr},
                       {"std_ipr", std::sqrt(var_ipr * bessel)}});
  }
  Json summary;
  summary["config"] = config_to_json(cfg);
  summary["config_hash"] = config_hash(cfg);
  summary["code_version"] = kCodeVersion;
  summary["prng"] = kPrngAlgorithm;
  summary["trajectories"] = cfg.trajectories;
  summary["n_jumps"] = std::move(n_jumps);
  summary["samples"] = std::move(samples);
  summary["finished"] = utc_timestamp();
  save_json_file(out_dir + "/ensemble_summary.json", summary);
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
              int threads) {
  const SweepOutput out = run_sweep(cfg, out_dir, threads, &std::cout);
  std::cout << "sweep complete: " << out.cells.size() << " cells, "
            << "spearman(cm, P_ss)=" << out.spearman_cm_pss
            << " spearman(ipr, P_ss)=" << out.spearman_ipr_pss << "\n";
  const long expected =
      static_cast<long>(cfg.sweep_param1->values.size()) *
      static_cast<long>(cfg.sweep_param2->values.size());
  return static_cast<long>(out.cells.size()) == expected ? 0 : 1;
}

}  // namespace liouvtraj
