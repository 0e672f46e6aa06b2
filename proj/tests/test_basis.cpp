#include <doctest.h>

#include <liouvtraj/basis.hpp>
#include <liouvtraj/rng.hpp>

using namespace liouvtraj;

namespace {

// Independent quadruple-loop Kronecker product used as an oracle.
Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      for (long k = 0; k < b.rows(); ++k)
        for (long l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

Matrix random_matrix(long rows, long cols, Rng& rng) {
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace

TEST_CASE("kron: identities and oracle") {
  const Matrix i2 = Matrix::Identity(2, 2);
  CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).norm() == 0.0);

  const Matrix zz = kron(pauli(PauliKind::Z), pauli(PauliKind::Z));
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  expect(2, 2) = -1.0;
  expect(3, 3) = 1.0;
  CHECK((zz - expect).norm() == 0.0);

  Rng rng(11);
  const Matrix a = random_matrix(2, 3, rng);
  const Matrix b = random_matrix(3, 2, rng);
  CHECK((kron(a, b) - kron_oracle(a, b)).norm() == 0.0);
}

TEST_CASE("pauli matrices and algebra") {
  const Matrix sx = pauli(PauliKind::X), sy = pauli(PauliKind::Y),
               sz = pauli(PauliKind::Z), sp = pauli(PauliKind::Plus),
               sm = pauli(PauliKind::Minus);
  CHECK(sp(0, 1) == Complex{1.0, 0.0});
  CHECK(sp(0, 0) == Complex{0.0, 0.0});
  CHECK((sm - sp.adjoint()).norm() == 0.0);
  CHECK((sp - 0.5 * (sx + kI * sy)).norm() < 1e-15);
  // [sx, sy] = 2i sz
  CHECK((sx * sy - sy * sx - 2.0 * kI * sz).norm() < 1e-15);
  CHECK((sx * sx - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("spin_operator: single-site embedding against Kronecker oracle") {
  const BasisSpec basis = BasisSpec::spin(2);
  REQUIRE(basis.dimension() == 4);
  // Site 1 of 2 (0-based; site 0 is the most significant factor).
  const Matrix got = spin_operator(basis, 1, PauliKind::X);
  const Matrix expect = kron_oracle(Matrix::Identity(2, 2),
                                    pauli(PauliKind::X));
  CHECK((got - expect).norm() == 0.0);

  const Matrix got0 = spin_operator(basis, 0, PauliKind::Y);
  const Matrix expect0 = kron_oracle(pauli(PauliKind::Y),
                                     Matrix::Identity(2, 2));
  CHECK((got0 - expect0).norm() == 0.0);
}

TEST_CASE("spin_operator: operators on different sites commute") {
  const BasisSpec basis = BasisSpec::spin(3);
  const Matrix a = spin_operator(basis, 0, PauliKind::X);
  const Matrix b = spin_operator(basis, 2, PauliKind::Plus);
  CHECK((a * b - b * a).norm() == 0.0);
  // Same-site anticommutation: {sx, sz} = 0.
  const Matrix x1 = spin_operator(basis, 1, PauliKind::X);
  const Matrix z1 = spin_operator(basis, 1, PauliKind::Z);
  CHECK((x1 * z1 + z1 * x1).norm() == 0.0);
}

TEST_CASE("fock bases: enumeration, dimensions, index_of") {
  const BasisSpec cut = BasisSpec::fock_cutoff(2, 3);
  CHECK(cut.dimension() == 10);  // tuples with n1 + n2 <= 3
  const BasisSpec fixed = BasisSpec::fock_fixed(4, 3);
  CHECK(fixed.dimension() == 20);  // C(3 + 4 - 1, 3)

  // Ascending lexicographic enumeration.
  const auto& st = cut.states();
  for (std::size_t k = 1; k < st.size(); ++k) CHECK(st[k - 1] < st[k]);
  for (long k = 0; k < cut.dimension(); ++k)
    CHECK(cut.index_of(st[k]) == k);
  CHECK(cut.index_of({4, 0}) == -1);
  CHECK(fixed.index_of({1, 1, 1, 1}) == -1);  // total 4 != 3
}

TEST_CASE("boson ladder operators: truncated matrix and commutator edge") {
  // Single mode, cutoff 2: a = [[0,1,0],[0,0,sqrt 2],[0,0,0]].
  const BasisSpec basis = BasisSpec::fock_cutoff(1, 2);
  const Matrix a = boson_annihilation(basis, 0);
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 1) = 1.0;
  expect(1, 2) = std::sqrt(2.0);
  CHECK((a - expect).norm() < 1e-15);
  CHECK((boson_creation(basis, 0) - a.adjoint()).norm() == 0.0);

  // [a, a^dag] = 1 away from the cutoff edge; -N_c at the edge.
  const int nc = 4;
  const BasisSpec b4 = BasisSpec::fock_cutoff(1, nc);
  const Matrix a4 = boson_annihilation(b4, 0);
  const Matrix comm = a4 * a4.adjoint() - a4.adjoint() * a4;
  for (int n = 0; n < nc; ++n)
    CHECK(std::abs(comm(n, n) - Complex{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(comm(nc, nc) - Complex{double(-nc), 0.0}) < 1e-12);

  // Number operator diagonal matches occupations.
  const Matrix num = boson_number(b4, 0);
  for (int n = 0; n <= nc; ++n)
    CHECK(std::abs(num(n, n) - Complex{double(n), 0.0}) < 1e-12);
}

TEST_CASE("ladder_product: exact composites in a fixed-number sector") {
  const BasisSpec basis = BasisSpec::fock_fixed(2, 2);  // {02, 11, 20}
  // Single ladder operators cannot stay inside the sector...
  CHECK(boson_annihilation(basis, 0).norm() == 0.0);
  // ...but the number-conserving hop a_0^dag a_1 acts exactly.
  const Matrix hop = ladder_product(
      basis, {{0, true}, {1, false}});
  // <20| a0^dag a1 |11> = sqrt(2)*sqrt(1); <11| a0^dag a1 |02> = sqrt(2).
  const long i02 = basis.index_of({0, 2});
  const long i11 = basis.index_of({1, 1});
  const long i20 = basis.index_of({2, 0});
  CHECK(std::abs(hop(i20, i11) - Complex{std::sqrt(2.0), 0.0}) < 1e-15);
  CHECK(std::abs(hop(i11, i02) - Complex{std::sqrt(2.0), 0.0}) < 1e-15);
  CHECK(hop.cwiseAbs().sum() ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));

  // Against the dense composition in the enclosing cutoff basis, restricted
  // to the fixed sector.
  const BasisSpec big = BasisSpec::fock_cutoff(2, 2);
  const Matrix dense =
      boson_creation(big, 0) * boson_annihilation(big, 1);
  for (long r = 0; r < basis.dimension(); ++r)
    for (long c = 0; c < basis.dimension(); ++c) {
      const long br = big.index_of(basis.states()[r]);
      const long bc = big.index_of(basis.states()[c]);
      CHECK(std::abs(hop(r, c) - dense(br, bc)) < 1e-14);
    }
}

TEST_CASE("ladder_product: rightmost factor acts first") {
  const BasisSpec basis = BasisSpec::fock_cutoff(1, 3);
  // a a^dag vs a^dag a differ by the commutator.
  const Matrix aad = ladder_product(basis, {{0, false}, {0, true}});
  const Matrix ada = ladder_product(basis, {{0, true}, {0, false}});
  for (int n = 0; n < 3; ++n)
    CHECK(std::abs((aad - ada)(n, n) - Complex{1.0, 0.0}) < 1e-12);
  // Coefficient is applied.
  const Matrix scaled = ladder_product(basis, {{0, true}, {0, false}},
                                       Complex{0.0, 2.0});
  CHECK((scaled - 2.0 * kI * ada).norm() < 1e-15);
}

TEST_CASE("vectorization: round trip and multiplication identity") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const long d = 2 + (rng.raw() % 4);
    const Matrix rho = random_matrix(d, d, rng);
    CHECK((devectorize(vectorize(rho)) - rho).norm() == 0.0);
    // Frobenius norm preserved.
    CHECK(vectorize(rho).norm() == doctest::Approx(rho.norm()).epsilon(1e-14));
  }

  // vec(A rho B^dag) = (A kron B^*) vec(rho), random 3x3.
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(3, 3, rng);
    const Matrix b = random_matrix(3, 3, rng);
    const Matrix rho = random_matrix(3, 3, rng);
    const Vector lhs = vectorize(a * rho * b.adjoint());
    const Vector rhs = kron(a, b.conjugate()) * vectorize(rho);
    CHECK((lhs - rhs).norm() < 1e-12 * lhs.norm());
  }
}

TEST_CASE("row-major layout is explicit") {
  Matrix m(2, 2);
  m << Complex{1, 0}, Complex{2, 0}, Complex{3, 0}, Complex{4, 0};
  const Vector v = vectorize(m);
  CHECK(v(0) == Complex{1, 0});
  CHECK(v(1) == Complex{2, 0});  // row 0, col 1 comes second
  CHECK(v(2) == Complex{3, 0});
  CHECK(v(3) == Complex{4, 0});
}

TEST_CASE("basis argument validation") {
  CHECK_THROWS_AS(BasisSpec::spin(0), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec::fock_cutoff(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec::fock_fixed(2, -1), std::invalid_argument);
  const BasisSpec basis = BasisSpec::spin(2);
  CHECK_THROWS_AS(spin_operator(basis, 2, PauliKind::X),
                  std::invalid_argument);
  CHECK_THROWS_AS(spin_operator(basis, -1, PauliKind::X),
                  std::invalid_argument);
}
