#pragma once

#include <vector>

#include "liouvtraj/lindblad.hpp"
#include "liouvtraj/spectral.hpp"

namespace liouvtraj {

// Expansion coefficients of a state in the biorthonormal eigenbasis.
struct OverlapCoefficients {
  Vector c;             // c_a = Tr{l_a^dag rho}
  Vector d;             // d_a = Tr{r_a rho}
  double purity = 0.0;  // Re Tr{rho^2}, computed directly from the input
};

OverlapCoefficients overlaps(const SpectralData& sd, const Matrix& rho);

// Gauge-invariant quasiprobabilities p_a = c_a d_a with degenerate clusters
// uniformized to their group mean, plus derived localization diagnostics.
struct QuasiDistribution {
  Vector p;       // after uniformization
  Vector p_raw;   // c_a d_a
  double cm = 0.0;
  double ipr = 0.0;       // sum |p_a|^2
  double ipr_alt = 0.0;   // Re sum p_a^2
  double purity_input = 0.0;
  Complex p0{0.0, 0.0};   // steady-state quasiprobability
};

QuasiDistribution quasiprobabilities(const OverlapCoefficients& co,
                                     const SpectralData& sd);

// Group-mean replacement within each degenerate cluster.
Vector uniformize(const Vector& p_raw, const SpectralData& sd);

// CM = Re[sum_a p_a lambda_a / <lambda>].  The pre-Re imaginary part must be
// below 1e-8 (conjugate pairing makes the value real); violations throw.
double center_of_mass(const Vector& p, const SpectralData& sd);

double ipr(const Vector& p);
// Re sum p_a^2 with the same 1e-8 imaginary-residue assertion.
double ipr_alt(const Vector& p);

// Per-sample observables of a pure trajectory state via the spectral route.
struct SampleObservables {
  double cm = 0.0;
  double ipr = 0.0;
  Complex p0{0.0, 0.0};
};
SampleObservables sampled_observables(const SpectralData& sd,
                                      const Vector& psi);
double sampled_cm(const SpectralData& sd, const Vector& psi);

// Exact identity for a pure state rho = |psi><psi|:
//   sum_a lambda_a p_a = Tr{rho L[rho]}
//     = sum_k gamma_k (|<psi|L_k|psi>|^2 - <psi|L_k^dag L_k|psi>).
// Independent of the spectral decomposition; used as a cross-check route.
double pure_state_lambda_weight(const LindbladSpec& spec, const Vector& psi);

// Statistical check of the steady-state-purity lower bound on the IPR over
// an ensemble of converged trajectory snapshots.
struct BoundReport {
  double p_ss = 0.0;      // purity of the exact steady state
  double mean_p0 = 0.0;   // Re of the ensemble-mean steady quasiprobability
  double se_p0 = 0.0;     // standard error of that mean
  double mean_ipr = 0.0;
  double se_ipr = 0.0;
  double p0_margin = 0.0;   // 3*se_p0 - |mean_p0 - p_ss|
  double ipr_margin = 0.0;  // mean_ipr + 3*se_ipr - p_ss^2
  bool p0_matches = false;
  bool ipr_bound_ok = false;
};
BoundReport bound_check(const std::vector<double>& p0_re,
                        const std::vector<double>& ipr_values, double p_ss);

}  // namespace liouvtraj
