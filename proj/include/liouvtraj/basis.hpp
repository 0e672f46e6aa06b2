#pragma once

#include <cstdint>
#include <vector>

#include "liouvtraj/common.hpp"

namespace liouvtraj {

// Hilbert-space basis for a lattice of identical sites.
//
//  Spin       — one qubit per site, dimension 2^sites.  Basis index encodes the
//               bitstring with site 0 as the most significant bit.
//  FockCutoff — bosonic occupations with a global cap sum(n_j) <= quanta.
//  FockFixed  — bosonic occupations with sum(n_j) == quanta exactly.
//
// Fock states are enumerated in ascending lexicographic order of the
// occupation tuple (n_0, n_1, ..., n_{sites-1}).
enum class BasisKind { Spin, FockCutoff, FockFixed };

class BasisSpec {
 public:
  static BasisSpec spin(int n_sites);
  static BasisSpec fock_cutoff(int n_sites, int max_total);
  static BasisSpec fock_fixed(int n_sites, int total);

  BasisKind kind() const { return kind_; }
  int sites() const { return sites_; }
  // Max total occupation (FockCutoff) or the fixed total (FockFixed).
  int quanta() const { return quanta_; }
  long dimension() const { return dim_; }

  // Occupation tuples, Fock bases only (lexicographically sorted).
  const std::vector<std::vector<int>>& states() const;
  // Index of an occupation tuple, or -1 if it lies outside the basis.
  long index_of(const std::vector<int>& occ) const;

  bool operator==(const BasisSpec& other) const {
    return kind_ == other.kind_ && sites_ == other.sites_ &&
           quanta_ == other.quanta_;
  }
  bool operator!=(const BasisSpec& other) const { return !(*this == other); }

 private:
  BasisSpec(BasisKind kind, int sites, int quanta);

  BasisKind kind_;
  int sites_;
  int quanta_;
  long dim_;
  std::vector<std::vector<int>> states_;  // empty for Spin
};

// One factor of a product of bosonic ladder operators.
struct LadderOp {
  int site = 0;
  bool dagger = false;  // true: creation, false: annihilation
};

// --- Spin operators ---------------------------------------------------------

enum class PauliKind { X, Y, Z, Plus, Minus };

// 2x2 Pauli / ladder matrix in the basis where sigma^z = diag(1, -1),
// sigma^{+-} = (sigma^x +- i sigma^y) / 2.
Matrix pauli(PauliKind kind);

// Pauli/ladder operator acting on one site of a Spin basis (identity
// elsewhere).  Site indices are 0-based.
Matrix spin_operator(const BasisSpec& basis, int site, PauliKind kind);

// --- Boson operators --------------------------------------------------------

// Annihilation operator a_site on a Fock basis.  Matrix elements follow
// a|n> = sqrt(n)|n-1>; transitions leaving the truncated basis are dropped
// (for FockCutoff a_site is always closed; for FockFixed a single ladder
// operator never closes, so compose number-conserving products with
// ladder_product instead).
Matrix boson_annihilation(const BasisSpec& basis, int site);
Matrix boson_creation(const BasisSpec& basis, int site);

// Operator for coeff * op_1 op_2 ... op_m (math order: op_m acts first).
// The product is applied exactly on occupation tuples — intermediate tuples
// are NOT truncated; only the final tuple is projected back onto the basis.
// This is what makes number-conserving composites (hopping terms, sums of
// ladder products) act correctly inside a FockFixed sector.
Matrix ladder_product(const BasisSpec& basis, const std::vector<LadderOp>& ops,
                      Complex coeff = Complex{1.0, 0.0});

// Number operator n_site = a_site^dag a_site (diagonal).
Matrix boson_number(const BasisSpec& basis, int site);

// --- Generic dense-matrix helpers ------------------------------------------

// Kronecker product, C((i*rowsB)+k, (j*colsB)+l) = A(i,j) * B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// Row-major vectorization: vec(rho)[i*D + j] = rho(i, j).  With this
// convention vec(A rho B) = (A otimes B^T) vec(rho).
Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v);

}  // namespace liouvtraj
