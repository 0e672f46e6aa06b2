#include "liouvtraj/models.hpp"

#include <cmath>

#include "liouvtraj/rng.hpp"

namespace liouvtraj {

BasisSpec xxz_basis(const XxzParams& p) { return BasisSpec::spin(p.N); }

BasisSpec bh_dimer_basis(const BhDimerParams& p) {
  return BasisSpec::fock_cutoff(2, p.N_c);
}

BasisSpec bh_chain_basis(const BhChainParams& p) {
  return BasisSpec::fock_fixed(p.N, p.N_b);
}

LindbladSpec xxz_model(const XxzParams& p) {
  require(p.N >= 2, "xxz_model: need at least two sites");
  require(p.gamma_l_plus > 0.0 && p.gamma_r_minus > 0.0,
          "xxz_model: boundary couplings must be positive");
  const BasisSpec basis = xxz_basis(p);
  const long d = basis.dimension();
  Matrix h = Matrix::Zero(d, d);
  auto op = [&](int site, PauliKind k) { return spin_operator(basis, site, k); };
  for (int j = 0; j + 1 < p.N; ++j) {
    h += p.J * (op(j, PauliKind::X) * op(j + 1, PauliKind::X) +
                op(j, PauliKind::Y) * op(j + 1, PauliKind::Y) +
                p.Delta * op(j, PauliKind::Z) * op(j + 1, PauliKind::Z));
  }
  for (int j = 0; j + 2 < p.N; ++j) {
    h += p.Jprime * (op(j, PauliKind::X) * op(j + 2, PauliKind::X) +
                     op(j, PauliKind::Y) * op(j + 2, PauliKind::Y));
  }
  LindbladSpec spec;
  spec.hamiltonian = std::move(h);
  spec.channels.push_back({p.gamma_l_plus, op(0, PauliKind::Plus)});
  spec.channels.push_back({p.gamma_r_minus, op(p.N - 1, PauliKind::Minus)});
  spec.validate();
  return spec;
}

LindbladSpec bh_dimer_model(const BhDimerParams& p) {
  require(p.N_c >= 1, "bh_dimer_model: cutoff must be at least 1");
  require(p.gamma > 0.0, "bh_dimer_model: loss rate must be positive");
  const BasisSpec basis = bh_dimer_basis(p);
  const long d = basis.dimension();
  Matrix h = Matrix::Zero(d, d);
  h += ladder_product(basis, {{1, true}, {0, false}}, -p.J);
  h += ladder_product(basis, {{0, true}, {1, false}}, -p.J);
  for (int j = 0; j < 2; ++j) {
    h += ladder_product(basis, {{j, true}, {j, false}}, -p.Delta);
    h += ladder_product(basis, {{j, true}, {j, true}, {j, false}, {j, false}},
                        0.5 * p.U);
  }
  h += ladder_product(basis, {{0, true}}, p.F);
  h += ladder_product(basis, {{0, false}}, p.F);
  LindbladSpec spec;
  spec.hamiltonian = std::move(h);
  spec.channels.push_back({p.gamma, boson_annihilation(basis, 0)});
  spec.channels.push_back({p.gamma, boson_annihilation(basis, 1)});
  spec.validate();
  return spec;
}

LindbladSpec bh_chain_model(const BhChainParams& p) {
  require(p.N >= 2, "bh_chain_model: need at least two sites");
  require(p.N_b >= 1, "bh_chain_model: need at least one boson");
  require(p.gamma > 0.0, "bh_chain_model: coupling must be positive");
  const BasisSpec basis = bh_chain_basis(p);
  const long d = basis.dimension();
  Matrix h = Matrix::Zero(d, d);
  for (int j = 0; j < p.N; ++j) {
    const int k = (j + 1) % p.N;
    h += ladder_product(basis, {{j, true}, {k, false}}, -p.J);
    h += ladder_product(basis, {{k, true}, {j, false}}, -p.J);
    h += ladder_product(basis, {{j, true}, {j, true}, {j, false}, {j, false}},
                        0.5 * p.U);
  }
  LindbladSpec spec;
  spec.hamiltonian = std::move(h);
  for (int j = 0; j < p.N; ++j) {
    const int k = (j + 1) % p.N;
    // (a_j^dag + a_k^dag)(a_j - a_k) expanded into four ladder products
    Matrix l = ladder_product(basis, {{j, true}, {j, false}});
    l -= ladder_product(basis, {{j, true}, {k, false}});
    l += ladder_product(basis, {{k, true}, {j, false}});
    l -= ladder_product(basis, {{k, true}, {k, false}});
    spec.channels.push_back({p.gamma, std::move(l)});
  }
  spec.validate();
  return spec;
}

Vector coherent_initial_dimer(const BhDimerParams& p, double scale) {
  const Complex denom{p.Delta, -p.gamma};
  require(std::abs(denom) > 0.0, "coherent_initial_dimer: Delta - i gamma = 0");
  const Complex alpha = scale * std::sqrt(p.F / denom);
  const BasisSpec basis = bh_dimer_basis(p);
  Vector psi(basis.dimension());
  for (long s = 0; s < basis.dimension(); ++s) {
    const auto& occ = basis.states()[s];
    Complex amp{1.0, 0.0};
    for (int j = 0; j < 2; ++j)
      for (int n = 1; n <= occ[j]; ++n)
        amp *= alpha / std::sqrt(static_cast<double>(n));
    psi(s) = amp;  // alpha^(n1+n2) / sqrt(n1! n2!)
  }
  const double norm = psi.norm();
  ensure(norm > 0.0, "coherent_initial_dimer: zero-norm projection");
  return psi / norm;
}

Vector bec_state(int N, int N_b) {
  const BasisSpec basis = BasisSpec::fock_fixed(N, N_b);
  Vector psi(basis.dimension());
  for (long s = 0; s < basis.dimension(); ++s) {
    const auto& occ = basis.states()[s];
    double amp = 1.0;  // proportional to prod_j 1/sqrt(n_j!)
    for (int j = 0; j < N; ++j)
      for (int n = 2; n <= occ[j]; ++n) amp /= std::sqrt(static_cast<double>(n));
    psi(s) = amp;
  }
  return psi / psi.norm();
}

Vector random_initial_state(const BasisSpec& basis, std::uint64_t seed) {
  Rng rng(seed);
  Vector psi(basis.dimension());
  for (long i = 0; i < basis.dimension(); ++i) psi(i) = rng.complex_normal();
  const double norm = psi.norm();
  ensure(norm > 0.0, "random_initial_state: zero-norm draw");
  return psi / norm;
}

}  // namespace liouvtraj
