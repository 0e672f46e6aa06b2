#pragma once

#include <vector>

#include "liouvtraj/common.hpp"

namespace liouvtraj {

// One dissipation channel: rate gamma > 0 and jump operator L.
struct Channel {
  double gamma = 0.0;
  Matrix jump;
};

// Full model definition: Hermitian Hamiltonian plus dissipation channels.
// drho/dt = -i[H, rho] + sum_k gamma_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
struct LindbladSpec {
  Matrix hamiltonian;
  std::vector<Channel> channels;

  long dim() const { return hamiltonian.rows(); }

  // Throws if H is not square/Hermitian (1e-10 relative Frobenius), a rate is
  // not positive, or a jump operator has mismatched dimensions.
  void validate() const;
};

// Right-hand side of the master equation applied to a density matrix.
Matrix apply_liouvillian(const LindbladSpec& spec, const Matrix& rho);

// Dense D^2 x D^2 superoperator in the row-major vectorization convention:
//   S = -i (H ox 1 - 1 ox H^T)
//       + sum_k gamma_k [ L ox conj(L) - 1/2 (L^dag L) ox 1 - 1/2 1 ox (L^dag L)^T ]
// so that S * vectorize(rho) = vectorize(apply_liouvillian(spec, rho)).
Matrix build_superoperator(const LindbladSpec& spec);

// Mean eigenvalue <lambda> = tr(S)/D^2 evaluated in closed form:
//   <lambda> = sum_k gamma_k (|tr L_k|^2 - D tr(L_k^dag L_k)) / D^2.
// The Hamiltonian part is traceless and does not contribute.
Complex spectral_center_closed_form(const LindbladSpec& spec);

}  // namespace liouvtraj
