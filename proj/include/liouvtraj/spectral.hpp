#pragma once

#include <iosfwd>
#include <vector>

#include "liouvtraj/common.hpp"

namespace liouvtraj {

// Options controlling the eigendecomposition post-processing.
struct SpectralOptions {
  // Degenerate eigenvalues are clustered with tolerance
  // cluster_rel_tol * (spectral radius).
  double cluster_rel_tol = 1e-8;
  // Warn (to *warn_stream if set, else stderr) when the right-eigenvector
  // matrix condition number exceeds this.
  double condition_warn = 1e8;
  // Target residual for the refined inverse giving the left eigenvectors.
  double inverse_target = 1e-10;
  std::ostream* warn_stream = nullptr;
};

// Gauge-fixed biorthonormal spectral decomposition of a Liouvillian
// superoperator.  M = D^2 eigenpairs, ordered with the steady state first and
// the rest by descending Re(lambda), ascending Im(lambda).
//
// Gauge: Tr{r_a^dag r_a} = 1 for a != steady; Tr{r_0} = 1 and l_0 = identity
// (up to inversion error) for the steady state.  Eigenoperators at
// complex-conjugate eigenvalues satisfy r_{a'} = r_a^dag exactly by
// construction; eigenoperators at (clustered) real eigenvalues are Hermitian.
struct SpectralData {
  long dim = 0;                         // Hilbert-space dimension D
  Vector eigenvalues;                   // size M = D^2 (steady forced to 0)
  Matrix right;                         // D^2 x M, column a = vec(r_a)
  Matrix left_rows;                     // M x D^2, row a = vec(l_a)^dag
  long steady_index = 0;                // always 0 in the canonical ordering
  std::vector<long> conj_partner;       // involution a <-> a'
  std::vector<std::vector<long>> groups;  // degenerate clusters
  std::vector<long> group_of;           // index -> cluster id
  double condition_number = 0.0;        // sigma_max/sigma_min of `right`
  double biorth_residual = 0.0;         // max |left_rows * right - I|
  Complex spectral_center{0.0, 0.0};    // mean eigenvalue

  long size() const { return eigenvalues.size(); }
  Matrix right_op(long alpha) const;    // r_alpha as a D x D matrix
  Matrix left_op(long alpha) const;     // l_alpha as a D x D matrix
};

// Full decomposition of a D^2 x D^2 superoperator.  Throws std::runtime_error
// when no eigenvalue lies within the cluster tolerance of zero, when the zero
// cluster contains more than one eigenvalue (degenerate steady manifold), or
// when the eigenvector matrix cannot be inverted to the target residual
// (numerically defective Liouvillian).
SpectralData diagonalize(const Matrix& superop,
                         const SpectralOptions& opts = {});

// Steady-state density matrix: Hermitized, unit-trace, verified positive
// semidefinite within psd_tol (throws otherwise).
Matrix steady_state(const SpectralData& sd, double psd_tol = 1e-8);

// Exact propagation rho(t) = sum_a exp(lambda_a t) Tr{l_a^dag rho0} r_a.
Matrix propagate_exact(const SpectralData& sd, const Matrix& rho0, double t);

}  // namespace liouvtraj
