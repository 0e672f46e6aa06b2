#include "liouvtraj/trajectory.hpp"

#include <cmath>

namespace liouvtraj {

namespace {

struct WindowStats {
  double mean = 0.0;
  double var = 0.0;  // population variance
};

WindowStats window_stats(const std::vector<double>& series, int window) {
  const long n = static_cast<long>(series.size());
  const long lo = n - window;
  double mean = 0.0;
  for (long i = lo; i < n; ++i) mean += series[i];
  mean /= window;
  double var = 0.0;
  for (long i = lo; i < n; ++i) {
    const double d = series[i] - mean;
    var += d * d;
  }
  var /= window;
  return {mean, var};
}

// Convergence rule: |mean_short - mean_long| <= combined RMS deviation.
// Non-strict comparison so an exactly constant series converges as soon as
// both windows are full.
bool windows_agree(const std::vector<double>& series, int wshort, int wlong,
                   RmsMode mode) {
  if (static_cast<long>(series.size()) < wlong) return false;
  const WindowStats s = window_stats(series, wshort);
  const WindowStats l = window_stats(series, wlong);
  const double combined = mode == RmsMode::Mean
                              ? std::sqrt(0.5 * (s.var + l.var))
                              : std::sqrt(s.var + l.var);
  return std::abs(s.mean - l.mean) <= combined;
}

}  // namespace

Matrix effective_hamiltonian(const LindbladSpec& spec) {
  spec.validate();
  Matrix heff = spec.hamiltonian;
  for (const auto& ch : spec.channels)
    heff -= 0.5 * kI * ch.gamma * (ch.jump.adjoint() * ch.jump);
  return heff;
}

TrajectoryEngine::TrajectoryEngine(const LindbladSpec& spec,
                                   const TrajectoryConfig& cfg)
    : dt_(cfg.dt), dp_max_(cfg.delta_p_max), heff_(effective_hamiltonian(spec)) {
  require(cfg.dt > 0.0, "TrajectoryEngine: dt must be positive");
  require(cfg.delta_p_max > 0.0 && cfg.delta_p_max <= 1.0,
          "TrajectoryEngine: delta_p_max must lie in (0, 1]");
  const long d = spec.dim();
  drift_ = Matrix::Identity(d, d) - kI * dt_ * heff_;
  for (const auto& ch : spec.channels) {
    gamma_.push_back(ch.gamma);
    jump_.push_back(ch.jump);
    scratch_.emplace_back(d);
  }
}

TrajectoryState TrajectoryEngine::make_state(const Vector& psi0,
                                             std::uint64_t seed) const {
  require(psi0.size() == drift_.rows(),
          "TrajectoryEngine: initial state dimension mismatch");
  const double norm = psi0.norm();
  require(std::abs(norm - 1.0) <= 1e-8,
          "TrajectoryEngine: initial state must be unit norm");
  TrajectoryState st;
  st.psi = psi0 / norm;
  st.t = 0.0;
  st.rng = Rng(seed);
  return st;
}

void TrajectoryEngine::step(TrajectoryState& state) const {
  const std::size_t nch = jump_.size();
  double dp = 0.0;
  for (std::size_t k = 0; k < nch; ++k) {
    scratch_[k].noalias() = jump_[k] * state.psi;
    dp += dt_ * gamma_[k] * scratch_[k].squaredNorm();
  }
  ensure(dp < dp_max_,
         "TrajectoryEngine: per-step jump probability " + std::to_string(dp) +
             " exceeds the guard; shrink dt");
  const double u = state.rng.uniform();
  if (u < dp) {
    // Channel by cumulative-sum inversion with a second draw.
    const double target = state.rng.uniform() * dp;
    std::size_t pick = nch - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < nch; ++k) {
      acc += dt_ * gamma_[k] * scratch_[k].squaredNorm();
      if (target < acc) {
        pick = k;
        break;
      }
    }
    const double jnorm = scratch_[pick].norm();
    ensure(jnorm > 1e-150,
           "TrajectoryEngine: selected jump annihilates the state");
    state.psi = scratch_[pick] / jnorm;
    state.jumps.push_back({state.t + dt_, static_cast<int>(pick)});
  } else {
    state.psi = drift_ * state.psi;
    state.psi /= state.psi.norm();
  }
  state.t += dt_;
}

void evolve_sampled(
    const Vector& psi0, const LindbladSpec& spec, const TrajectoryConfig& cfg,
    const std::function<void(const TrajectoryState&)>& on_sample) {
  const TrajectoryEngine engine(spec, cfg);
  TrajectoryState st = engine.make_state(psi0, cfg.seed);
  const long max_steps = std::llround(cfg.t_max / cfg.dt);
  require(cfg.sample_stride >= 1, "evolve: sample_stride must be >= 1");
  on_sample(st);
  for (long i = 1; i <= max_steps; ++i) {
    engine.step(st);
    if (i % cfg.sample_stride == 0) on_sample(st);
  }
}

std::vector<TrajectoryState> evolve(const Vector& psi0,
                                    const LindbladSpec& spec,
                                    const TrajectoryConfig& cfg) {
  std::vector<TrajectoryState> snapshots;
  evolve_sampled(psi0, spec, cfg,
                 [&](const TrajectoryState& st) { snapshots.push_back(st); });
  return snapshots;
}

Matrix ensemble_average(const std::vector<Vector>& states) {
  require(!states.empty(), "ensemble_average: empty ensemble");
  const long d = states.front().size();
  Matrix rho = Matrix::Zero(d, d);
  for (const auto& psi : states) {
    require(psi.size() == d, "ensemble_average: mixed dimensions");
    rho.noalias() += psi * psi.adjoint();
  }
  return rho / static_cast<double>(states.size());
}

ConvergenceResult converged_steady_sample(
    const Vector& psi0, const LindbladSpec& spec, const TrajectoryConfig& cfg,
    const std::function<double(const TrajectoryState&)>& cm_callback) {
  const TrajectoryEngine engine(spec, cfg);
  TrajectoryState st = engine.make_state(psi0, cfg.seed);
  const long max_steps = std::llround(cfg.t_max / cfg.dt);
  require(cfg.sample_stride >= 1,
          "converged_steady_sample: sample_stride must be >= 1");
  require(cfg.window_short >= 2 && cfg.window_long > cfg.window_short,
          "converged_steady_sample: need window_long > window_short >= 2");
  ConvergenceResult res;
  res.sample_times.push_back(st.t);
  res.cm_series.push_back(cm_callback(st));
  for (long i = 1; i <= max_steps; ++i) {
    engine.step(st);
    if (i % cfg.sample_stride != 0) continue;
    res.sample_times.push_back(st.t);
    res.cm_series.push_back(cm_callback(st));
    if (windows_agree(res.cm_series, cfg.window_short, cfg.window_long,
                      cfg.rms_mode)) {
      res.converged = true;
      break;
    }
  }
  res.t_ss = st.t;
  res.state = std::move(st);
  return res;
}

long replay_convergence(const std::vector<double>& cm_series, int window_short,
                        int window_long, RmsMode mode) {
  std::vector<double> prefix;
  prefix.reserve(cm_series.size());
  for (std::size_t i = 0; i < cm_series.size(); ++i) {
    prefix.push_back(cm_series[i]);
    if (windows_agree(prefix, window_short, window_long, mode))
      return static_cast<long>(i);
  }
  return -1;
}

}  // namespace liouvtraj
