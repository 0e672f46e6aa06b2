#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "liouvtraj/lindblad.hpp"
#include "liouvtraj/rng.hpp"

namespace liouvtraj {

// How the short/long window standard deviations are combined in the
// steady-state convergence rule.
enum class RmsMode {
  Mean,  // sqrt((s_short^2 + s_long^2) / 2)   (default)
  Sum,   // sqrt(s_short^2 + s_long^2)
};

struct TrajectoryConfig {
  double dt = 1e-3;          // first-order step, units of 1/J
  double t_max = 100.0;      // hard cap for convergence runs
  int sample_stride = 10;    // integration steps per observable sample
  int window_short = 20;     // convergence window lengths, in samples
  int window_long = 50;
  double delta_p_max = 0.1;  // per-step total jump probability guard
  RmsMode rms_mode = RmsMode::Mean;
  std::uint64_t seed = 0;
};

struct JumpEvent {
  double t = 0.0;  // time at the end of the step in which the jump fired
  int channel = 0;
};

struct TrajectoryState {
  Vector psi;
  double t = 0.0;
  std::vector<JumpEvent> jumps;
  Rng rng{0};
};

// H_eff = H - (i/2) sum_k gamma_k L_k^dag L_k.
Matrix effective_hamiltonian(const LindbladSpec& spec);

// First-order quantum-jump stepper.  Precomputes the drift matrix
// 1 - i H_eff dt and keeps the jump operators for per-step probabilities.
class TrajectoryEngine {
 public:
  TrajectoryEngine(const LindbladSpec& spec, const TrajectoryConfig& cfg);

  // One step of size dt: with probability dp_k = dt gamma_k <psi|L_k^dag
  // L_k|psi> jump through channel k (channel chosen by cumulative-sum
  // inversion with a second uniform draw), otherwise apply the renormalized
  // drift.  Throws if dp >= delta_p_max (shrink dt) or a selected jump
  // annihilates the state.
  void step(TrajectoryState& state) const;

  TrajectoryState make_state(const Vector& psi0, std::uint64_t seed) const;

  const Matrix& heff() const { return heff_; }

 private:
  double dt_;
  double dp_max_;
  Matrix heff_;
  Matrix drift_;  // 1 - i H_eff dt
  std::vector<double> gamma_;
  std::vector<Matrix> jump_;
  mutable std::vector<Vector> scratch_;  // L_k psi per channel
};

// Snapshots every sample_stride steps (the t=0 state included) up to t_max.
// Deterministic in (psi0, spec, cfg.seed).
std::vector<TrajectoryState> evolve(const Vector& psi0,
                                    const LindbladSpec& spec,
                                    const TrajectoryConfig& cfg);

// Same trajectory as evolve() but invokes on_sample instead of storing
// snapshots; useful for long runs and streaming output.
void evolve_sampled(const Vector& psi0, const LindbladSpec& spec,
                    const TrajectoryConfig& cfg,
                    const std::function<void(const TrajectoryState&)>& on_sample);

// (1/M) sum_m |psi_m><psi_m| accumulated in trajectory-index order.
Matrix ensemble_average(const std::vector<Vector>& states);

struct ConvergenceResult {
  TrajectoryState state;  // at t_ss (or at t_max if not converged)
  bool converged = false;
  double t_ss = 0.0;
  std::vector<double> sample_times;
  std::vector<double> cm_series;  // one value per sample, for offline replay
};

// Evolves while monitoring cm_callback once per sample.  Terminates at the
// first sample (with both windows full) where the short- and long-window
// running means differ by no more than the combined standard deviation
// (see RmsMode); otherwise runs to t_max and sets converged = false.
ConvergenceResult converged_steady_sample(
    const Vector& psi0, const LindbladSpec& spec, const TrajectoryConfig& cfg,
    const std::function<double(const TrajectoryState&)>& cm_callback);

// Offline replay of the convergence rule over a recorded CM series: returns
// the (0-based) sample index at which evolution would stop, or -1 if never.
long replay_convergence(const std::vector<double>& cm_series, int window_short,
                        int window_long, RmsMode mode);

}  // namespace liouvtraj
