#include <doctest.h>

#include <liouvtraj/basis.hpp>
#include <liouvtraj/models.hpp>
#include <liouvtraj/observables.hpp>
#include <liouvtraj/rng.hpp>
#include <liouvtraj/spectral.hpp>

using namespace liouvtraj;

namespace {

Matrix random_density(long d, Rng& rng) {
  Matrix a(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

SpectralData xxz3_spectral() {
  XxzParams p;
  p.N = 3;
  return diagonalize(build_superoperator(xxz_model(p)));
}

}  // namespace

TEST_CASE("steady coefficient: c_0 = 1 for any unit-trace state") {
  const SpectralData sd = xxz3_spectral();
  Rng rng(31);
  for (int k = 0; k < 5; ++k) {
    const OverlapCoefficients co = overlaps(sd, random_density(sd.dim, rng));
    CHECK(std::abs(co.c[0] - Complex{1.0, 0.0}) < 1e-9);
  }
}

TEST_CASE("overlap coefficients reconstruct the state") {
  const SpectralData sd = xxz3_spectral();
  Rng rng(32);
  const Matrix rho = random_density(sd.dim, rng);
  const OverlapCoefficients co = overlaps(sd, rho);
  Vector v = Vector::Zero(sd.size());
  for (long a = 0; a < sd.size(); ++a) v += co.c[a] * sd.right.col(a);
  CHECK((devectorize(v) - rho).norm() < 1e-8);
}

TEST_CASE("quasiprobabilities: sum rule, gauge invariance, uniformization") {
  const SpectralData sd = xxz3_spectral();
  Rng rng(33);
  const Matrix rho = random_density(sd.dim, rng);
  const OverlapCoefficients co = overlaps(sd, rho);
  const QuasiDistribution q = quasiprobabilities(co, sd);

  // sum p = Tr rho^2 both before and after uniformization (group sums kept).
  CHECK(std::abs(q.p_raw.sum() - Complex{co.purity, 0.0}) < 1e-8);
  CHECK(std::abs(q.p.sum() - Complex{co.purity, 0.0}) < 1e-8);
  CHECK(q.p0 == q.p[0]);

  // Rescale every eigenvector pair by a random nonzero complex gauge factor.
  SpectralData gauged = sd;
  Rng grng(34);
  for (long a = 0; a < sd.size(); ++a) {
    const Complex k{0.3 + grng.uniform(), grng.uniform() - 0.5};
    gauged.right.col(a) *= k;
    gauged.left_rows.row(a) /= k;  // rows hold vec(l)^dag, so this keeps l^dag r = 1
  }
  const QuasiDistribution qg = quasiprobabilities(overlaps(gauged, rho), gauged);
  CHECK((qg.p - q.p).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(qg.cm - q.cm) < 1e-9);
  CHECK(std::abs(qg.ipr - q.ipr) < 1e-9);

  // Uniformization is the within-cluster mean, preserving each group sum.
  for (const auto& g : sd.groups) {
    Complex raw_sum = 0.0, uni_sum = 0.0;
    for (long a : g) {
      raw_sum += q.p_raw[a];
      uni_sum += q.p[a];
    }
    CHECK(std::abs(raw_sum - uni_sum) < 1e-13 * std::max(1.0, std::abs(raw_sum)));
    for (long a : g)
      CHECK(std::abs(q.p[a] - raw_sum / double(g.size())) < 1e-12);
  }
}

TEST_CASE("steady state itself: p concentrated entirely on p_0") {
  const SpectralData sd = xxz3_spectral();
  const Matrix rho_ss = steady_state(sd);
  const QuasiDistribution q = quasiprobabilities(overlaps(sd, rho_ss), sd);
  CHECK(std::abs(q.p0 - Complex{q.purity_input, 0.0}) < 1e-8);
  for (long a = 1; a < sd.size(); ++a) CHECK(std::abs(q.p[a]) < 1e-8);
  CHECK(q.cm < 1e-7);  // no mass on decaying modes
  CHECK(q.cm >= -1e-8);
}

TEST_CASE("dark-state condensate: CM = 0, IPR = 1") {
  const BhChainParams p;  // U = 0
  const SpectralData sd = diagonalize(build_superoperator(bh_chain_model(p)));
  const Vector psi = bec_state(p.N, p.N_b);
  const SampleObservables so = sampled_observables(sd, psi);
  CHECK(std::abs(so.cm) < 1e-8);
  CHECK(so.ipr == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(so.p0 - Complex{1.0, 0.0}) < 1e-8);
}

TEST_CASE("CM is invariant under a uniform rescaling of the generator") {
  XxzParams p;
  p.N = 3;
  const Matrix s = build_superoperator(xxz_model(p));
  const SpectralData sd = diagonalize(s);
  const SpectralData sd_scaled = diagonalize(2.7 * s);
  const Vector psi = random_initial_state(xxz_basis(p), 17);
  const double cm_a = sampled_cm(sd, psi);
  const double cm_b = sampled_cm(sd_scaled, psi);
  CHECK(cm_a == doctest::Approx(cm_b).epsilon(1e-9));
}

TEST_CASE("pure-state identity ties the spectral and jump-rate routes") {
  XxzParams p;
  p.N = 3;
  const LindbladSpec spec = xxz_model(p);
  const SpectralData sd = diagonalize(build_superoperator(spec));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vector psi = random_initial_state(xxz_basis(p), 300 + s);
    const QuasiDistribution q =
        quasiprobabilities(overlaps(sd, psi * psi.adjoint()), sd);
    double spectral_route = 0.0;
    for (long a = 0; a < sd.size(); ++a)
      spectral_route += (q.p[a] * sd.eigenvalues(a)).real();
    const double jump_route = pure_state_lambda_weight(spec, psi);
    CHECK(spectral_route ==
          doctest::Approx(jump_route).epsilon(1e-8));
    // CM = that weight over <lambda>; both are negative reals here.
    CHECK(q.cm == doctest::Approx(jump_route / sd.spectral_center.real())
                      .epsilon(1e-8));
    CHECK(q.cm >= 0.0);
  }
}

TEST_CASE("purity-derivative identity via finite differences") {
  XxzParams p;
  p.N = 3;
  const LindbladSpec spec = xxz_model(p);
  const SpectralData sd = diagonalize(build_superoperator(spec));
  const double h = 5e-4;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vector psi = random_initial_state(xxz_basis(p), 400 + s);
    const Matrix rho = psi * psi.adjoint();
    const auto purity_at = [&](double t) {
      const Matrix r = propagate_exact(sd, rho, t);
      return (r * r.adjoint()).trace().real();
    };
    // One-sided third-order stencil at t = 0 (propagation is forward-only).
    const double fd = 0.5 *
                      (-11.0 * purity_at(0.0) + 18.0 * purity_at(h) -
                       9.0 * purity_at(2.0 * h) + 2.0 * purity_at(3.0 * h)) /
                      (6.0 * h);
    const double cm = sampled_cm(sd, psi);
    const double analytic = sd.spectral_center.real() * cm;
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::abs(analytic));
  }
}

TEST_CASE("ipr variants agree when the distribution is effectively real") {
  // Synthetic real distribution.
  Vector p(4);
  p << 0.4, 0.3, 0.2, 0.1;
  CHECK(ipr(p) == doctest::Approx(0.16 + 0.09 + 0.04 + 0.01).epsilon(1e-14));
  CHECK(ipr_alt(p) == doctest::Approx(ipr(p)).epsilon(1e-12));

  // Uniform distribution: IPR reaches its 1/M floor.
  const long m = 16;
  Vector u = Vector::Constant(m, Complex{1.0 / m, 0.0});
  CHECK(ipr(u) == doctest::Approx(1.0 / m).epsilon(1e-12));

  // Physical case: chain steady state has a purely real distribution.
  const SpectralData sd =
      diagonalize(build_superoperator(bh_chain_model(BhChainParams{})));
  const QuasiDistribution q =
      quasiprobabilities(overlaps(sd, steady_state(sd)), sd);
  CHECK(q.ipr == doctest::Approx(q.ipr_alt).epsilon(1e-9));
}

TEST_CASE("ipr_alt rejects distributions with a large imaginary residue") {
  Vector bad(2);
  bad << Complex{0.5, 0.4}, Complex{0.5, 0.3};
  CHECK_THROWS_AS(ipr_alt(bad), std::runtime_error);
}

TEST_CASE("bound report: saturated ensemble and margins") {
  // All snapshots exactly at the steady value of a pure steady state.
  const std::vector<double> p0(10, 1.0);
  const std::vector<double> iprs(10, 1.0);
  const BoundReport br = bound_check(p0, iprs, 1.0);
  CHECK(br.p0_matches);
  CHECK(br.ipr_bound_ok);
  CHECK(br.se_p0 == 0.0);
  CHECK(br.mean_ipr == 1.0);
  CHECK(br.p0_margin == 0.0);
  CHECK(br.ipr_margin == 0.0);

  // A mismatched ensemble with zero variance must fail the p0 comparison.
  const BoundReport bad = bound_check(std::vector<double>(10, 0.2),
                                      std::vector<double>(10, 0.01), 0.9);
  CHECK_FALSE(bad.p0_matches);
  CHECK_FALSE(bad.ipr_bound_ok);
}
