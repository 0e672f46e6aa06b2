#include "liouvtraj/basis.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace liouvtraj {

namespace {

// Enumerate occupation tuples (ascending lexicographic).  When `fixed` the
// total must equal `quanta`, otherwise the total may be anything <= quanta.
void enumerate_fock(int sites, int quanta, bool fixed, int site,
                    int remaining, std::vector<int>& work,
                    std::vector<std::vector<int>>& out) {
  if (site == sites) {
    if (!fixed || remaining == 0) out.push_back(work);
    return;
  }
  if (fixed && site == sites - 1) {
    work[site] = remaining;
    out.push_back(work);
    work[site] = 0;
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    work[site] = n;
    enumerate_fock(sites, quanta, fixed, site + 1, remaining - n, work, out);
  }
  work[site] = 0;
}

}  // namespace

BasisSpec::BasisSpec(BasisKind kind, int sites, int quanta)
    : kind_(kind), sites_(sites), quanta_(quanta), dim_(0) {
  require(sites >= 1, "BasisSpec: need at least one site");
  if (kind_ == BasisKind::Spin) {
    require(sites <= 20, "BasisSpec: spin chain too large");
    dim_ = 1L << sites;
    return;
  }
  require(quanta >= 0, "BasisSpec: negative quanta");
  std::vector<int> work(sites, 0);
  enumerate_fock(sites, quanta, kind_ == BasisKind::FockFixed, 0, quanta, work,
                 states_);
  dim_ = static_cast<long>(states_.size());
  require(dim_ >= 1, "BasisSpec: empty basis");
}

BasisSpec BasisSpec::spin(int n_sites) {
  return BasisSpec(BasisKind::Spin, n_sites, 1);
}

BasisSpec BasisSpec::fock_cutoff(int n_sites, int max_total) {
  return BasisSpec(BasisKind::FockCutoff, n_sites, max_total);
}

BasisSpec BasisSpec::fock_fixed(int n_sites, int total) {
  return BasisSpec(BasisKind::FockFixed, n_sites, total);
}

const std::vector<std::vector<int>>& BasisSpec::states() const {
  require(kind_ != BasisKind::Spin, "states(): spin basis has no Fock tuples");
  return states_;
}

long BasisSpec::index_of(const std::vector<int>& occ) const {
  require(kind_ != BasisKind::Spin, "index_of(): Fock bases only");
  require(static_cast<int>(occ.size()) == sites_,
          "index_of(): wrong tuple length");
  auto it = std::lower_bound(states_.begin(), states_.end(), occ);
  if (it == states_.end() || *it != occ) return -1;
  return static_cast<long>(it - states_.begin());
}

Matrix pauli(PauliKind kind) {
  Matrix m = Matrix::Zero(2, 2);
  switch (kind) {
    case PauliKind::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliKind::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case PauliKind::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliKind::Plus:  // (x + i y)/2
      m(0, 1) = 1.0;
      break;
    case PauliKind::Minus:  // (x - i y)/2
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

Matrix spin_operator(const BasisSpec& basis, int site, PauliKind kind) {
  require(basis.kind() == BasisKind::Spin, "spin_operator: spin basis only");
  require(site >= 0 && site < basis.sites(), "spin_operator: site out of range");
  const long left = 1L << site;
  const long right = 1L << (basis.sites() - site - 1);
  Matrix m = pauli(kind);
  if (left > 1) m = kron(Matrix::Identity(left, left), m);
  if (right > 1) m = kron(m, Matrix::Identity(right, right));
  return m;
}

Matrix ladder_product(const BasisSpec& basis, const std::vector<LadderOp>& ops,
                      Complex coeff) {
  require(basis.kind() != BasisKind::Spin, "ladder_product: Fock bases only");
  for (const auto& op : ops)
    require(op.site >= 0 && op.site < basis.sites(),
            "ladder_product: site out of range");
  const long dim = basis.dimension();
  Matrix m = Matrix::Zero(dim, dim);
  std::vector<int> occ;
  for (long s = 0; s < dim; ++s) {
    occ = basis.states()[s];
    double amp = 1.0;
    // Rightmost factor acts first; intermediate tuples are exact (untruncated).
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      if (it->dagger) {
        amp *= std::sqrt(static_cast<double>(occ[it->site] + 1));
        occ[it->site] += 1;
      } else {
        if (occ[it->site] == 0) {
          amp = 0.0;
          break;
        }
        amp *= std::sqrt(static_cast<double>(occ[it->site]));
        occ[it->site] -= 1;
      }
    }
    if (amp == 0.0) continue;
    const long t = basis.index_of(occ);
    if (t < 0) continue;  // final state outside the truncated basis: dropped
    m(t, s) += coeff * amp;
  }
  return m;
}

Matrix boson_annihilation(const BasisSpec& basis, int site) {
  return ladder_product(basis, {{site, false}});
}

Matrix boson_creation(const BasisSpec& basis, int site) {
  return ladder_product(basis, {{site, true}});
}

Matrix boson_number(const BasisSpec& basis, int site) {
  return ladder_product(basis, {{site, true}, {site, false}});
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Vector vectorize(const Matrix& rho) {
  require(rho.rows() == rho.cols(), "vectorize: square matrices only");
  const long d = rho.rows();
  Vector v(d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
  return v;
}

Matrix devectorize(const Vector& v) {
  const long d = static_cast<long>(std::llround(std::sqrt(
      static_cast<double>(v.size()))));
  require(d * d == v.size(), "devectorize: length is not a perfect square");
  Matrix rho(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) rho(i, j) = v(i * d + j);
  return rho;
}

}  // namespace liouvtraj
