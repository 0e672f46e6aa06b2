#include <doctest.h>

#include <liouvtraj/basis.hpp>
#include <liouvtraj/lindblad.hpp>
#include <liouvtraj/models.hpp>
#include <liouvtraj/rng.hpp>

using namespace liouvtraj;

TEST_CASE("XXZ catalog: dimensions and boundary channels") {
  XxzParams p;  // defaults: N=4, J=1, Delta=0.7, Jprime=2, gammas 0.6 / 1.4
  const LindbladSpec spec = xxz_model(p);
  const BasisSpec basis = xxz_basis(p);
  CHECK(basis.dimension() == 16);
  CHECK(spec.dim() == 16);
  REQUIRE(spec.channels.size() == 2);
  CHECK(spec.channels[0].gamma == 0.6);
  CHECK(spec.channels[1].gamma == 1.4);
  CHECK((spec.channels[0].jump - spin_operator(basis, 0, PauliKind::Plus))
            .norm() == 0.0);
  CHECK((spec.channels[1].jump - spin_operator(basis, 3, PauliKind::Minus))
            .norm() == 0.0);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("XXZ N=2: Hamiltonian matches the hand expansion") {
  XxzParams p;
  p.N = 2;
  p.J = 1.3;
  p.Delta = 0.7;
  p.Jprime = 5.0;  // no j+2 pair exists at N=2; must not contribute
  const Matrix h = xxz_model(p).hamiltonian;
  const double jd = p.J * p.Delta;
  Matrix expect(4, 4);
  expect << jd, 0, 0, 0,             //
      0, -jd, 2 * p.J, 0,            //
      0, 2 * p.J, -jd, 0,            //
      0, 0, 0, jd;
  CHECK((h - expect).norm() < 1e-12);
}

TEST_CASE("XXZ N=3: next-to-nearest coupling enters with weight Jprime") {
  XxzParams base;
  base.N = 3;
  base.Jprime = 0.0;
  XxzParams bumped = base;
  bumped.Jprime = 0.8;
  const BasisSpec basis = xxz_basis(base);
  const Matrix diff =
      xxz_model(bumped).hamiltonian - xxz_model(base).hamiltonian;
  const Matrix expect =
      0.8 * (spin_operator(basis, 0, PauliKind::X) *
                 spin_operator(basis, 2, PauliKind::X) +
             spin_operator(basis, 0, PauliKind::Y) *
                 spin_operator(basis, 2, PauliKind::Y));
  CHECK((diff - expect).norm() < 1e-12);
}

TEST_CASE("BH dimer catalog: dimension, channels, matrix elements") {
  BhDimerParams p;  // defaults: J=2, U=1, Delta=2.5, F=3, gamma=1, N_c=3
  const LindbladSpec spec = bh_dimer_model(p);
  const BasisSpec basis = bh_dimer_basis(p);
  CHECK(basis.dimension() == 10);
  CHECK(spec.dim() == 10);
  REQUIRE(spec.channels.size() == 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(spec.channels[j].gamma == p.gamma);
    CHECK((spec.channels[j].jump - boson_annihilation(basis, j)).norm() == 0.0);
  }
  const long vac = basis.index_of({0, 0});
  const long one0 = basis.index_of({1, 0});
  const long one1 = basis.index_of({0, 1});
  const long two0 = basis.index_of({2, 0});
  const Matrix& h = spec.hamiltonian;
  CHECK(h(vac, one0) == Complex{p.F, 0.0});       // drive F a_1^dag + h.c.
  CHECK(h(vac, one1) == Complex{0.0, 0.0});       // drive only on mode 1
  CHECK(h(one0, one0) == Complex{-p.Delta, 0.0});
  CHECK(std::abs(h(two0, two0) - Complex{-2 * p.Delta + p.U, 0.0}) < 1e-12);
  CHECK(std::abs(h(one0, one1) - Complex{-p.J, 0.0}) < 1e-12);  // hopping
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("BH chain catalog: dimension, channel structure, symmetry") {
  BhChainParams p;  // defaults: N=4, J=1, U=0, gamma=1, N_b=3
  const LindbladSpec spec = bh_chain_model(p);
  const BasisSpec basis = bh_chain_basis(p);
  CHECK(basis.dimension() == 20);
  CHECK(spec.dim() == 20);
  REQUIRE(spec.channels.size() == 4);

  Matrix ntot = Matrix::Zero(20, 20);
  for (int j = 0; j < 4; ++j) ntot += boson_number(basis, j);

  for (int j = 0; j < 4; ++j) {
    CHECK(spec.channels[j].gamma == p.gamma);
    const int jp = (j + 1) % 4;
    // L_j = (a_j^dag + a_{j+1}^dag)(a_j - a_{j+1}), built term by term with
    // exact tuple-level products inside the fixed-number sector.
    Matrix expect = ladder_product(basis, {{j, true}, {j, false}}) -
                    ladder_product(basis, {{j, true}, {jp, false}}) +
                    ladder_product(basis, {{jp, true}, {j, false}}) -
                    ladder_product(basis, {{jp, true}, {jp, false}});
    CHECK((spec.channels[j].jump - expect).norm() < 1e-12);
    // Strong symmetry: every channel commutes with the total number operator.
    const Matrix& l = spec.channels[j].jump;
    CHECK((l * ntot - ntot * l).norm() < 1e-12);
  }
  const Matrix& h = spec.hamiltonian;
  CHECK((h * ntot - ntot * h).norm() < 1e-12);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("Hamiltonians are Hermitian for random parameters") {
  Rng rng(5150);
  for (int k = 0; k < 5; ++k) {
    XxzParams xp;
    xp.N = 3;
    xp.J = 2.0 * rng.uniform() - 1.0;
    xp.Delta = 2.0 * rng.uniform() - 1.0;
    xp.Jprime = 2.0 * rng.uniform() - 1.0;
    const Matrix hx = xxz_model(xp).hamiltonian;
    CHECK((hx - hx.adjoint()).norm() < 1e-12);

    BhDimerParams dp;
    dp.J = 2.0 * rng.uniform() - 1.0;
    dp.U = 2.0 * rng.uniform();
    dp.Delta = 4.0 * rng.uniform() - 2.0;
    dp.F = 3.0 * rng.uniform();
    const Matrix hd = bh_dimer_model(dp).hamiltonian;
    CHECK((hd - hd.adjoint()).norm() < 1e-12);

    BhChainParams cp;
    cp.J = 2.0 * rng.uniform() - 1.0;
    cp.U = 10.0 * rng.uniform();
    const Matrix hc = bh_chain_model(cp).hamiltonian;
    CHECK((hc - hc.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("coherent dimer state: vacuum at F=0, unit norm, occupation check") {
  BhDimerParams p;
  p.F = 0.0;
  const Vector psi0 = coherent_initial_dimer(p);
  const BasisSpec basis = bh_dimer_basis(p);
  Vector vac = Vector::Zero(basis.dimension());
  vac[basis.index_of({0, 0})] = 1.0;
  CHECK((psi0 - vac).norm() < 1e-12);

  BhDimerParams q;  // defaults otherwise; mild drive, generous truncation
  q.N_c = 8;
  const double scale = 0.5;
  const Vector psi = coherent_initial_dimer(q, scale);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // |alpha|^2 = scale^2 * F / |Delta - i gamma|
  const double expect_n =
      scale * scale * q.F / std::abs(Complex{q.Delta, -q.gamma});
  const BasisSpec big = bh_dimer_basis(q);
  const double n1 =
      (psi.adjoint() * boson_number(big, 0) * psi).value().real();
  CHECK(std::abs(n1 - expect_n) < 0.05 * expect_n);
  // Symmetric drive response: both modes carry the same coherent amplitude.
  const double n2 =
      (psi.adjoint() * boson_number(big, 1) * psi).value().real();
  CHECK(n2 == doctest::Approx(n1).epsilon(1e-9));
}

TEST_CASE("BEC state: dark state of every chain channel, exact steady state") {
  BhChainParams p;  // U = 0
  const LindbladSpec spec = bh_chain_model(p);
  const Vector psi = bec_state(p.N, p.N_b);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& ch : spec.channels)
    CHECK((ch.jump * psi).norm() < 1e-12);
  // H at U=0 has the condensate as an eigenstate, so |BEC><BEC| is steady.
  const Matrix rho = psi * psi.adjoint();
  CHECK(apply_liouvillian(spec, rho).norm() < 1e-9);
}

TEST_CASE("random initial states: deterministic, unit norm, uniform overlap") {
  const BasisSpec basis = BasisSpec::spin(4);
  const Vector a = random_initial_state(basis, 42);
  const Vector b = random_initial_state(basis, 42);
  CHECK((a - b).norm() == 0.0);  // bit-identical for equal seeds
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((a - random_initial_state(basis, 43)).norm() > 1e-3);

  // Mean squared overlap of independent Haar-like states is 1/D.
  const long d = basis.dimension();
  const int n = 100;
  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vector u = random_initial_state(basis, 1000 + 2 * k);
    const Vector v = random_initial_state(basis, 1001 + 2 * k);
    const double ov = std::norm((u.adjoint() * v).value());
    const double delta = ov - mean;
    mean += delta / (k + 1);
    m2 += delta * (ov - mean);
  }
  const double se = std::sqrt(m2 / (n - 1) / n);
  CHECK(std::abs(mean - 1.0 / d) < 3.0 * se);
}
