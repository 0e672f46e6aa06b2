#pragma once

#include <cstdint>

#include "liouvtraj/basis.hpp"
#include "liouvtraj/lindblad.hpp"

namespace liouvtraj {

// Boundary-driven Heisenberg XXZ chain with next-to-nearest-neighbor
// interactions, open boundary conditions:
//   H = J sum_{j<N-1} (x_j x_{j+1} + y_j y_{j+1} + Delta z_j z_{j+1})
//     + Jprime sum_{j<N-2} (x_j x_{j+2} + y_j y_{j+2})
// with a raising channel on the first site and a lowering channel on the
// last: (gamma_l_plus, sigma_0^+), (gamma_r_minus, sigma_{N-1}^-).
struct XxzParams {
  int N = 4;
  double J = 1.0;
  double Delta = 0.7;
  double Jprime = 2.0;
  double gamma_l_plus = 0.6;
  double gamma_r_minus = 1.4;
};

// Driven-dissipative Bose-Hubbard dimer on a total-occupation-truncated
// two-mode Fock space:
//   H = -J (a_2^dag a_1 + a_1^dag a_2)
//     + sum_j (-Delta n_j + (U/2) a_j^dag^2 a_j^2) + F (a_1^dag + a_1)
// with uniform single-mode loss channels (gamma, a_1), (gamma, a_2).
struct BhDimerParams {
  double J = 2.0;
  double U = 1.0;
  double Delta = 2.5;
  double F = 3.0;
  double gamma = 1.0;
  int N_c = 3;
};

// Dissipative Bose-Hubbard chain, periodic, fixed total boson number
// (strong symmetry):
//   H = -J sum_j (a_j^dag a_{j+1} + h.c.) + (U/2) sum_j a_j^dag^2 a_j^2
// with channels L_j = (a_j^dag + a_{j+1}^dag)(a_j - a_{j+1}) at uniform
// coupling gamma, site N == site 0.
struct BhChainParams {
  int N = 4;
  double J = 1.0;
  double U = 0.0;
  double gamma = 1.0;
  int N_b = 3;
};

BasisSpec xxz_basis(const XxzParams& p);
BasisSpec bh_dimer_basis(const BhDimerParams& p);
BasisSpec bh_chain_basis(const BhChainParams& p);

LindbladSpec xxz_model(const XxzParams& p);
LindbladSpec bh_dimer_model(const BhDimerParams& p);
LindbladSpec bh_chain_model(const BhChainParams& p);

// Truncated two-mode coherent state |alpha>|alpha> with
// alpha = scale * sqrt(F / (Delta - i gamma)), renormalized after projection
// onto the FockCutoff basis.
Vector coherent_initial_dimer(const BhDimerParams& p, double scale = 3.0);

// Normalized zero-momentum condensate (sum_j a_j^dag)^{N_b}|vac> in the
// FockFixed(N, N_b) basis.
Vector bec_state(int N, int N_b);

// Unit-norm state with i.i.d. standard-complex-normal coefficients from a
// deterministic stream; same seed gives a bit-identical vector.
Vector random_initial_state(const BasisSpec& basis, std::uint64_t seed);

}  // namespace liouvtraj
