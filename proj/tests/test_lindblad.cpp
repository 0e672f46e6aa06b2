#include <doctest.h>

#include <liouvtraj/basis.hpp>
#include <liouvtraj/lindblad.hpp>
#include <liouvtraj/rng.hpp>

using namespace liouvtraj;

namespace {

Matrix random_matrix(long d, Rng& rng) {
  Matrix m(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) m(i, j) = rng.complex_normal();
  return m;
}

Matrix random_hermitian(long d, Rng& rng) {
  const Matrix m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

LindbladSpec random_spec(long d, int channels, Rng& rng) {
  LindbladSpec spec;
  spec.hamiltonian = random_hermitian(d, rng);
  for (int k = 0; k < channels; ++k)
    spec.channels.push_back({0.1 + rng.uniform(), random_matrix(d, rng)});
  return spec;
}

}  // namespace

TEST_CASE("single-qubit decay: action of the generator") {
  LindbladSpec spec;
  spec.hamiltonian = Matrix::Zero(2, 2);
  spec.channels.push_back({1.0, pauli(PauliKind::Minus)});
  spec.validate();

  // Excited state: index 0 (sigma^- maps index 0 -> index 1).
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const Matrix out = apply_liouvillian(spec, rho);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = -1.0;
  expect(1, 1) = 1.0;
  CHECK((out - expect).norm() < 1e-15);

  // Coherence decays at gamma/2.
  Matrix coh = Matrix::Zero(2, 2);
  coh(0, 1) = 1.0;
  CHECK((apply_liouvillian(spec, coh) + 0.5 * coh).norm() < 1e-15);
}

TEST_CASE("superoperator matches the direct action to 1e-12") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const long d = 2 + (rng.raw() % 3);
    const LindbladSpec spec = random_spec(d, 1 + (rng.raw() % 3), rng);
    const Matrix s = build_superoperator(spec);
    for (int rep = 0; rep < 3; ++rep) {
      const Matrix rho = random_matrix(d, rng);
      const Vector via_matrix = s * vectorize(rho);
      const Vector direct = vectorize(apply_liouvillian(spec, rho));
      CHECK((via_matrix - direct).norm() <=
            1e-12 * std::max(1.0, direct.norm()));
    }
  }
}

TEST_CASE("trace preservation: vec(1) is a left null vector") {
  Rng rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    const long d = 2 + (rng.raw() % 3);
    const LindbladSpec spec = random_spec(d, 2, rng);
    const Matrix s = build_superoperator(spec);
    const Vector idv = vectorize(Matrix::Identity(d, d));
    CHECK((idv.adjoint() * s).norm() < 1e-11 * s.norm());
    // Equivalent statement on the direct action.
    const Matrix rho = random_matrix(d, rng);
    CHECK(std::abs(apply_liouvillian(spec, rho).trace()) <
          1e-12 * std::max(1.0, rho.norm()));
  }
}

TEST_CASE("Hermiticity preservation, 50 random cases") {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const long d = 2 + (rng.raw() % 4);
    const LindbladSpec spec = random_spec(d, 1 + (rng.raw() % 2), rng);
    const Matrix rho = random_hermitian(d, rng);
    const Matrix out = apply_liouvillian(spec, rho);
    CHECK((out - out.adjoint()).norm() < 1e-12 * std::max(1.0, out.norm()));
  }
}

TEST_CASE("closed-form spectral center equals tr(S)/D^2") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const long d = 2 + (rng.raw() % 4);
    const LindbladSpec spec = random_spec(d, 1 + (rng.raw() % 3), rng);
    const Matrix s = build_superoperator(spec);
    const Complex via_trace = s.trace() / Complex{double(d * d), 0.0};
    const Complex closed = spectral_center_closed_form(spec);
    CHECK(std::abs(via_trace - closed) < 1e-12 * std::abs(closed));
  }
}

TEST_CASE("spec validation rejects malformed input") {
  Rng rng(8);
  LindbladSpec spec;
  spec.hamiltonian = random_matrix(3, rng);  // not Hermitian
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec.hamiltonian = random_hermitian(3, rng);
  spec.channels.push_back({-0.5, random_matrix(3, rng)});  // bad rate
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec.channels.clear();
  spec.channels.push_back({1.0, random_matrix(2, rng)});  // dim mismatch
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec.channels.clear();
  spec.channels.push_back({1.0, random_matrix(3, rng)});
  CHECK_NOTHROW(spec.validate());
}
