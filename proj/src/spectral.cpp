#include "liouvtraj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "liouvtraj/basis.hpp"

namespace liouvtraj {

namespace {

struct UnionFind {
  std::vector<long> parent;
  explicit UnionFind(long n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0L);
  }
  long find(long x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void merge(long a, long b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

// vec(r) -> vec(r^dag) in the row-major convention.
Vector dagger_vec(const Vector& v, long d) {
  Vector out(d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) out(i * d + j) = std::conj(v(j * d + i));
  return out;
}

// Replace the columns of a self-conjugate degenerate group by an orthonormal
// basis of Hermitian eigenoperators.  The eigenspace is closed under the
// adjoint, so the Hermitian and anti-Hermitian parts of the group's columns
// span its Hermitian sector; a real Gram eigendecomposition picks n
// independent combinations.
void hermitian_group_basis(Matrix& vecs, const std::vector<long>& members,
                           long d) {
  const long n = static_cast<long>(members.size());
  const long m = d * d;
  Matrix cand(m, 2 * n);
  for (long i = 0; i < n; ++i) {
    const Vector v = vecs.col(members[i]);
    const Vector vd = dagger_vec(v, d);
    cand.col(2 * i) = 0.5 * (v + vd);
    cand.col(2 * i + 1) = (v - vd) / (2.0 * kI);
  }
  RealMatrix gram(2 * n, 2 * n);
  for (long a = 0; a < 2 * n; ++a)
    for (long b = 0; b < 2 * n; ++b)
      gram(a, b) = cand.col(a).dot(cand.col(b)).real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
  ensure(es.info() == Eigen::Success,
         "diagonalize: Gram eigendecomposition failed");
  const RealVector ev = es.eigenvalues();  // ascending
  ensure(ev(2 * n - n) > 1e-12 * std::max(ev(2 * n - 1), 1e-300),
         "diagonalize: degenerate group has no full Hermitian basis "
         "(eigenspace not closed under the adjoint)");
  for (long i = 0; i < n; ++i) {
    // i-th largest Gram eigenvector -> one Hermitian basis operator
    const RealVector coeff = es.eigenvectors().col(2 * n - 1 - i);
    Vector col = Vector::Zero(m);
    for (long a = 0; a < 2 * n; ++a) col += coeff(a) * cand.col(a);
    vecs.col(members[i]) = col / col.norm();
  }
}

}  // namespace

Matrix SpectralData::right_op(long alpha) const {
  return devectorize(right.col(alpha));
}

Matrix SpectralData::left_op(long alpha) const {
  return devectorize(left_rows.row(alpha).adjoint());
}

SpectralData diagonalize(const Matrix& superop, const SpectralOptions& opts) {
  require(superop.rows() == superop.cols(), "diagonalize: square input only");
  const long m = superop.rows();
  const long d =
      static_cast<long>(std::llround(std::sqrt(static_cast<double>(m))));
  require(d * d == m, "diagonalize: size must be a perfect square D^2");

  Eigen::ComplexEigenSolver<Matrix> solver(superop);
  ensure(solver.info() == Eigen::Success, "diagonalize: eigensolver failed");
  Vector evals = solver.eigenvalues();
  Matrix vecs = solver.eigenvectors();

  const double radius = evals.cwiseAbs().maxCoeff();
  const double eps = opts.cluster_rel_tol * std::max(radius, 1e-300);

  // Unique steady state: exactly one eigenvalue within the cluster tolerance
  // of zero.
  long n_zero = 0;
  long steady_raw = 0;
  double min_abs = std::abs(evals(0));
  for (long i = 0; i < m; ++i) {
    const double a = std::abs(evals(i));
    if (a <= eps) ++n_zero;
    if (a < min_abs) {
      min_abs = a;
      steady_raw = i;
    }
  }
  ensure(n_zero >= 1,
         "diagonalize: no eigenvalue within cluster tolerance of zero "
         "(input is not a trace-preserving Liouvillian?)");
  ensure(n_zero == 1,
         "diagonalize: degenerate steady-state manifold (" +
             std::to_string(n_zero) + " eigenvalues near zero); not supported");

  // Canonical order: steady state first, then descending Re, ascending Im.
  std::vector<long> order(m);
  std::iota(order.begin(), order.end(), 0L);
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    if (a == steady_raw) return true;
    if (b == steady_raw) return false;
    const Complex la = evals(a), lb = evals(b);
    if (la.real() != lb.real()) return la.real() > lb.real();
    if (la.imag() != lb.imag()) return la.imag() < lb.imag();
    return a < b;
  });
  Vector sorted_evals(m);
  Matrix sorted_vecs(m, m);
  for (long i = 0; i < m; ++i) {
    sorted_evals(i) = evals(order[i]);
    sorted_vecs.col(i) = vecs.col(order[i]);
  }
  evals = std::move(sorted_evals);
  vecs = std::move(sorted_vecs);
  evals(0) = Complex{0.0, 0.0};  // pin the steady eigenvalue exactly

  // Single-linkage clustering of degenerate eigenvalues.
  UnionFind uf(m);
  for (long i = 0; i < m; ++i)
    for (long j = i + 1; j < m; ++j)
      if (std::abs(evals(i) - evals(j)) <= eps) uf.merge(i, j);
  std::vector<std::vector<long>> groups;
  std::vector<long> group_of(m, -1);
  for (long i = 0; i < m; ++i) {
    const long root = uf.find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    group_of[i] = group_of[root];
    groups[group_of[i]].push_back(i);
  }
  ensure(groups[group_of[0]].size() == 1,
         "diagonalize: degenerate steady-state cluster; not supported");

  // Classify groups and match complex-conjugate partners.
  const long n_groups = static_cast<long>(groups.size());
  std::vector<Complex> rep(n_groups);
  for (long g = 0; g < n_groups; ++g) {
    Complex acc{0.0, 0.0};
    for (long i : groups[g]) acc += evals(i);
    rep[g] = acc / static_cast<double>(groups[g].size());
  }
  std::vector<long> partner_group(n_groups, -1);
  std::vector<long> conj_partner(m, -1);
  for (long g = 0; g < n_groups; ++g) {
    if (std::abs(rep[g].imag()) <= eps) partner_group[g] = g;
  }
  for (long g = 0; g < n_groups; ++g) {
    if (partner_group[g] >= 0 || rep[g].imag() < 0.0) continue;
    long best = -1;
    double best_dist = 0.0;
    for (long h = 0; h < n_groups; ++h) {
      if (h == g || rep[h].imag() > 0.0) continue;
      const double dist = std::abs(rep[h] - std::conj(rep[g]));
      if (best < 0 || dist < best_dist) {
        best = h;
        best_dist = dist;
      }
    }
    ensure(best >= 0 && best_dist <= std::max(eps, 1e-10 * radius),
           "diagonalize: spectrum not closed under complex conjugation");
    ensure(groups[g].size() == groups[best].size() && partner_group[best] < 0,
           "diagonalize: mismatched conjugate cluster sizes");
    partner_group[g] = best;
    partner_group[best] = g;
  }
  for (long g = 0; g < n_groups; ++g)
    ensure(partner_group[g] >= 0,
           "diagonalize: unpaired eigenvalue cluster (conjugation closure "
           "violated)");

  // Fix the basis group by group.
  for (long g = 0; g < n_groups; ++g) {
    const auto& mem = groups[g];
    if (partner_group[g] == g) {
      // Real (self-conjugate) cluster: Hermitian eigenoperators.
      hermitian_group_basis(vecs, mem, d);
      for (long i : mem) conj_partner[i] = i;
      if (group_of[0] == g) {
        // Steady state: normalize to unit trace instead of unit Frobenius.
        Complex tr{0.0, 0.0};
        for (long i = 0; i < d; ++i) tr += vecs(i * d + i, 0);
        ensure(std::abs(tr) > 1e-12,
               "diagonalize: traceless steady-state candidate");
        vecs.col(0) /= tr;
      }
    } else if (rep[g].imag() > 0.0) {
      // Primary member of a conjugate pair of clusters: orthonormalize, then
      // mirror the partner cluster as exact Hermitian conjugates.
      const auto& pmem = groups[partner_group[g]];
      const long n = static_cast<long>(mem.size());
      Matrix block(m, n);
      for (long i = 0; i < n; ++i) block.col(i) = vecs.col(mem[i]);
      Eigen::HouseholderQR<Matrix> qr(block);
      Matrix q = qr.householderQ() * Matrix::Identity(m, n);
      for (long i = 0; i < n; ++i) {
        vecs.col(mem[i]) = q.col(i);
        vecs.col(pmem[i]) = dagger_vec(q.col(i), d);
        conj_partner[mem[i]] = pmem[i];
        conj_partner[pmem[i]] = mem[i];
      }
    }
  }

  // Left eigenvectors: refined inverse of the right-eigenvector matrix.
  Eigen::PartialPivLU<Matrix> lu(vecs);
  Matrix left = lu.inverse();
  const Matrix id = Matrix::Identity(m, m);
  double residual = (left * vecs - id).cwiseAbs().maxCoeff();
  for (int pass = 0; pass < 4 && residual > opts.inverse_target; ++pass) {
    left = left * (2.0 * id - vecs * left);  // Newton-Schulz refinement
    residual = (left * vecs - id).cwiseAbs().maxCoeff();
  }
  ensure(std::isfinite(residual) && residual <= 1e-9,
         "diagonalize: right-eigenvector matrix numerically singular "
         "(biorthonormality residual " + std::to_string(residual) + ")");

  Eigen::BDCSVD<Matrix> svd(vecs);
  const RealVector sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (cond > opts.condition_warn) {
    std::ostream& os = opts.warn_stream ? *opts.warn_stream : std::cerr;
    os << "[liouvtraj] warning: eigenvector condition number " << cond
       << " exceeds " << opts.condition_warn
       << "; quasiprobabilities may be unreliable\n";
  }

  SpectralData sd;
  sd.dim = d;
  sd.eigenvalues = std::move(evals);
  sd.right = std::move(vecs);
  sd.left_rows = std::move(left);
  sd.steady_index = 0;
  sd.conj_partner = std::move(conj_partner);
  sd.groups = std::move(groups);
  sd.group_of = std::move(group_of);
  sd.condition_number = cond;
  sd.biorth_residual = residual;
  sd.spectral_center = sd.eigenvalues.mean();
  return sd;
}

Matrix steady_state(const SpectralData& sd, double psd_tol) {
  Matrix rho = sd.right_op(sd.steady_index);
  const double herm = (rho - rho.adjoint()).norm();
  ensure(herm <= 1e-8 * std::max(1.0, rho.norm()),
         "steady_state: non-Hermitian steady candidate");
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  ensure(es.eigenvalues().minCoeff() >= -psd_tol,
         "steady_state: steady candidate not positive semidefinite");
  return rho;
}

Matrix propagate_exact(const SpectralData& sd, const Matrix& rho0, double t) {
  require(t >= 0.0, "propagate_exact: t must be non-negative");
  require(rho0.rows() == sd.dim && rho0.cols() == sd.dim,
          "propagate_exact: dimension mismatch");
  Vector c = sd.left_rows * vectorize(rho0);
  for (long a = 0; a < sd.size(); ++a)
    c(a) *= std::exp(sd.eigenvalues(a) * t);
  return devectorize(sd.right * c);
}

}  // namespace liouvtraj
