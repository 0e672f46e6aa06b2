#include "liouvtraj/validate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "liouvtraj/models.hpp"
#include "liouvtraj/observables.hpp"
#include "liouvtraj/sweep.hpp"
#include "liouvtraj/trajectory.hpp"

namespace liouvtraj {

namespace {

std::string fmt(double x) { return format_float(x); }

void add_check(ValidationReport& rep, std::ostream* progress,
               const std::string& name, bool passed,
               const std::string& detail) {
  rep.checks.push_back({name, passed, detail});
  if (progress)
    *progress << (passed ? "[ok]   " : "[FAIL] ") << name << ": " << detail
              << "\n";
}

struct ModelCase {
  std::string name;
  ModelBundle mb;
  SpectralData sd;
};

std::vector<ModelCase> default_cases() {
  std::vector<ModelCase> cases;
  for (const char* preset :
       {"xxz_localized", "bh_dimer_near", "bh_chain_u0"}) {
    ExperimentConfig cfg = parse_config(preset_config(preset));
    ModelBundle mb = build_model(cfg.model, cfg.params);
    SpectralData sd = diagonalize(build_superoperator(mb.spec));
    cases.push_back({preset, std::move(mb), std::move(sd)});
  }
  return cases;
}

Matrix random_density_matrix(long d, Rng& rng) {
  Matrix a(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Vector vec_dagger(const Vector& v) {
  return vectorize(devectorize(v).adjoint());
}

// Deliberately wrong superoperator assembled with the column-major
// vectorization convention; used by a canary to prove the action/matrix
// cross-check can detect the classic convention mix-up.
Matrix wrong_convention_superoperator(const LindbladSpec& spec) {
  const long d = spec.dim();
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = -kI * (kron(id, spec.hamiltonian) -
                    kron(spec.hamiltonian.transpose(), id));
  for (const auto& ch : spec.channels) {
    const Matrix& l = ch.jump;
    const Matrix ldl = l.adjoint() * l;
    s += ch.gamma * (kron(l.conjugate(), l) - 0.5 * kron(id, ldl) -
                     0.5 * kron(ldl.transpose(), id));
  }
  return s;
}

}  // namespace

ValidationReport run_validation(std::ostream* progress) {
  ValidationReport rep;
  std::vector<ModelCase> cases = default_cases();

  // --- spectral identities on the three default models ----------------------
  for (const auto& mc : cases) {
    const SpectralData& sd = mc.sd;
    const long d = sd.dim;

    add_check(rep, progress, "biorthonormality/" + mc.name,
              sd.biorth_residual <= 1e-9,
              "max |l^dag r - delta| = " + fmt(sd.biorth_residual));

    const Vector l0 = sd.left_rows.row(0).adjoint();
    const double l0_res =
        (l0 - vectorize(Matrix::Identity(d, d))).norm() / std::sqrt(double(d));
    add_check(rep, progress, "steady_left_identity/" + mc.name,
              l0_res <= 1e-8, "||l_0 - 1||/sqrt(D) = " + fmt(l0_res));

    double conj_res = 0.0;
    for (long a = 0; a < sd.size(); ++a) {
      const long b = sd.conj_partner[a];
      conj_res = std::max(
          conj_res,
          (vec_dagger(sd.right.col(a)) - sd.right.col(b)).cwiseAbs().maxCoeff());
    }
    add_check(rep, progress, "conjugation_closure/" + mc.name,
              conj_res <= 1e-8,
              "max |r_conj(a) - r_a^dag| = " + fmt(conj_res));

    Rng rng(41000 + d);
    double comp_res = 0.0, sum_res = 0.0, lam_res = 0.0, pair_res = 0.0,
           cm_im = 0.0, ipr_min = 1.0;
    for (int trial = 0; trial < 6; ++trial) {
      Matrix rho;
      Vector psi;
      const bool pure = trial < 4;
      if (pure) {
        psi = random_initial_state(mc.mb.basis, rng.raw());
        rho = psi * psi.adjoint();
      } else {
        rho = random_density_matrix(d, rng);
      }
      const OverlapCoefficients co = overlaps(sd, rho);
      comp_res = std::max(
          comp_res,
          (devectorize(sd.right * co.c) - rho).norm() / rho.norm());
      const QuasiDistribution q = quasiprobabilities(co, sd);
      // sum p_a = Tr{rho^2}; equals 1 exactly when rho is pure
      sum_res = std::max(sum_res,
                         std::abs(q.p.sum() - Complex{co.purity, 0.0}));
      if (pure) {
        const Complex lw = (q.p.array() * sd.eigenvalues.array()).sum();
        const double lw_ref = pure_state_lambda_weight(mc.mb.spec, psi);
        lam_res = std::max(lam_res, std::abs(lw - Complex{lw_ref, 0.0}) /
                                        std::max(1.0, std::abs(lw_ref)));
      }
      for (long a = 0; a < sd.size(); ++a)
        pair_res = std::max(
            pair_res, std::abs(q.p(sd.conj_partner[a]) - std::conj(q.p(a))));
      const Complex num = (q.p.array() * sd.eigenvalues.array()).sum();
      cm_im = std::max(cm_im, std::abs(std::imag(num / sd.spectral_center)));
      // Cauchy-Schwarz: ipr >= (sum|p|)^2 / M >= purity^2 / M
      ipr_min = std::min(
          ipr_min, q.ipr - co.purity * co.purity / double(sd.size()));
    }
    add_check(rep, progress, "completeness/" + mc.name, comp_res <= 1e-8,
              "max reconstruction residual = " + fmt(comp_res));
    add_check(rep, progress, "sum_rule_purity/" + mc.name, sum_res <= 1e-8,
              "max |sum p - purity| = " + fmt(sum_res));
    add_check(rep, progress, "sum_rule_lambda/" + mc.name, lam_res <= 1e-8,
              "max rel diff spectral vs jump-rate route = " + fmt(lam_res));
    add_check(rep, progress, "conjugate_pairing/" + mc.name,
              pair_res <= 1e-9,
              "max |p_conj(a) - conj(p_a)| = " + fmt(pair_res));
    add_check(rep, progress, "cm_imaginary_residue/" + mc.name,
              cm_im <= 1e-8, "max |Im CM| = " + fmt(cm_im));
    add_check(rep, progress, "ipr_lower_bound/" + mc.name,
              ipr_min >= -1e-12,
              "min (ipr - purity^2/D^2) = " + fmt(ipr_min));

    // Propagation preserves trace and Hermiticity.
    Matrix rho0 = random_density_matrix(d, rng);
    const Matrix rho_t = propagate_exact(sd, rho0, 0.7);
    const double tr_res = std::abs(rho_t.trace() - Complex{1.0, 0.0});
    const double herm_res = (rho_t - rho_t.adjoint()).norm() / rho_t.norm();
    add_check(rep, progress, "propagation_trace_hermiticity/" + mc.name,
              tr_res <= 1e-9 && herm_res <= 1e-7,
              "|tr - 1| = " + fmt(tr_res) + ", herm residual = " +
                  fmt(herm_res));
  }

  // --- gauge invariance of the quasiprobabilities ---------------------------
  {
    const ModelCase& mc = cases[0];
    Rng rng(52001);
    const Vector psi = random_initial_state(mc.mb.basis, rng.raw());
    const Matrix rho = psi * psi.adjoint();
    const Vector p_before =
        quasiprobabilities(overlaps(mc.sd, rho), mc.sd).p;
    SpectralData mutated = mc.sd;
    const Complex k{0.8, 0.45};
    mutated.right.col(3) *= k;
    mutated.left_rows.row(3) /= k;
    const Vector p_after =
        quasiprobabilities(overlaps(mutated, rho), mutated).p;
    const double res = (p_after - p_before).cwiseAbs().maxCoeff();
    add_check(rep, progress, "gauge_invariance", res <= 1e-9,
              "max |p' - p| under rescaling = " + fmt(res));
  }

  // --- nonnegative CM along a trajectory ------------------------------------
  {
    const ModelCase& mc = cases[0];
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.t_max = 5.0;
    tc.sample_stride = 50;
    tc.seed = derive_seed(90001, 0, 1);
    const Vector psi0 = random_initial_state(mc.mb.basis, 90002);
    double cm_min = 1e300;
    evolve_sampled(psi0, mc.mb.spec, tc, [&](const TrajectoryState& st) {
      cm_min = std::min(cm_min, sampled_cm(mc.sd, st.psi));
    });
    add_check(rep, progress, "cm_nonnegative_snapshots", cm_min >= -1e-8,
              "min CM over snapshots = " + fmt(cm_min));
  }

  // --- dark state of the uniform-condensate chain ---------------------------
  {
    const ModelCase& mc = cases[2];
    const BhChainParams p;  // defaults match the bh_chain_u0 preset
    const Vector bec = bec_state(p.N, p.N_b);
    double ch_res = 0.0;
    for (const auto& ch : mc.mb.spec.channels)
      ch_res = std::max(ch_res, (ch.jump * bec).norm());
    const Matrix rho = bec * bec.adjoint();
    const double liouv_res = apply_liouvillian(mc.mb.spec, rho).norm();
    add_check(rep, progress, "bec_dark_state",
              ch_res <= 1e-12 && liouv_res <= 1e-9,
              "max ||L_j psi|| = " + fmt(ch_res) +
                  ", ||L[rho]||_F = " + fmt(liouv_res));
  }

  // --- symmetry commutators -------------------------------------------------
  {
    const XxzParams xp;
    const BasisSpec sb = xxz_basis(xp);
    Matrix mag = Matrix::Zero(sb.dimension(), sb.dimension());
    for (int i = 0; i < xp.N; ++i)
      mag += spin_operator(sb, i, PauliKind::Z);
    const Matrix& h = cases[0].mb.spec.hamiltonian;
    const double mag_res = (h * mag - mag * h).norm();

    const BhChainParams cp;
    const BasisSpec cb = bh_chain_basis(cp);
    Matrix ntot = Matrix::Zero(cb.dimension(), cb.dimension());
    for (int i = 0; i < cp.N; ++i) ntot += boson_number(cb, i);
    const Matrix& hc = cases[2].mb.spec.hamiltonian;
    double n_res = (hc * ntot - ntot * hc).norm();
    for (const auto& ch : cases[2].mb.spec.channels)
      n_res = std::max(n_res,
                       (ch.jump * ntot - ntot * ch.jump).norm());
    add_check(rep, progress, "symmetry_commutators",
              mag_res <= 1e-10 && n_res <= 1e-10,
              "||[H,M]|| = " + fmt(mag_res) +
                  ", max ||[.,N]|| = " + fmt(n_res));
  }

  // --- jump statistics: single-qubit decay against the analytic law --------
  {
    LindbladSpec spec;
    spec.hamiltonian = Matrix::Zero(2, 2);
    spec.channels.push_back({1.0, pauli(PauliKind::Minus)});
    Vector psi0 = Vector::Zero(2);
    psi0(0) = 1.0;  // sigma_minus maps index 0 to index 1
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.t_max = 5.0;
    const TrajectoryEngine engine(spec, tc);
    const long max_steps = std::llround(tc.t_max / tc.dt);
    const int m_total = 10000;
    std::vector<double> ts;
    ts.reserve(m_total);
    for (int m = 0; m < m_total; ++m) {
      TrajectoryState st = engine.make_state(psi0, derive_seed(777, 0, m + 1));
      for (long s = 0; s < max_steps && st.jumps.empty(); ++s)
        engine.step(st);
      if (!st.jumps.empty()) ts.push_back(st.jumps.front().t);
    }
    std::sort(ts.begin(), ts.end());
    const double n = static_cast<double>(ts.size());
    const double z = 1.0 - std::exp(-tc.t_max);  // truncation normalizer
    double dstat = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double f = (1.0 - std::exp(-ts[i])) / z;
      dstat = std::max(dstat, std::max(f - i / n, (i + 1) / n - f));
    }
    const double crit = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
    add_check(rep, progress, "jump_time_distribution", dstat <= crit,
              "KS D = " + fmt(dstat) + " vs 1% critical " + fmt(crit) +
                  " (n = " + std::to_string(ts.size()) + ")");
  }

  // --- trajectory determinism ----------------------------------------------
  {
    const ModelCase& mc = cases[0];
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.t_max = 1.0;
    tc.seed = derive_seed(314159, 0, 1);
    const Vector psi0 = random_initial_state(mc.mb.basis, 271828);
    const auto run = [&] { return evolve(psi0, mc.mb.spec, tc); };
    const auto a = run(), b = run();
    bool identical = a.size() == b.size();
    for (std::size_t i = 0; identical && i < a.size(); ++i)
      identical = a[i].psi == b[i].psi &&
                  a[i].jumps.size() == b[i].jumps.size();
    add_check(rep, progress, "trajectory_determinism", identical,
              identical ? "two seeded runs are bitwise identical"
                        : "seeded runs diverged");
  }

  // --- convergence-rule replay ----------------------------------------------
  {
    const std::vector<double> constant(60, 0.7);
    const long fire = replay_convergence(constant, 20, 50, RmsMode::Mean);
    std::vector<double> ramp(200);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.01 * i;
    const long ramp_fire = replay_convergence(ramp, 20, 50, RmsMode::Mean);
    add_check(rep, progress, "convergence_rule_replay",
              fire == 49 && ramp_fire == -1,
              "constant stream fires at sample " + std::to_string(fire + 1) +
                  " (1-based), steady ramp never fires");
  }

  // --- PRNG distribution checks ---------------------------------------------
  {
    const long n = 1000000;
    Rng rng(987654321);
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < n; ++i) {
      const double u = rng.uniform();
      s += u;
      s2 += u * u;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    Complex zsum{0.0, 0.0};
    double r2 = 0.0;
    for (long i = 0; i < n; ++i) {
      const Complex zval = rng.complex_normal();
      zsum += zval;
      r2 += std::norm(zval);
    }
    const double zmean = std::abs(zsum) / n;
    const double r2mean = r2 / n;
    const bool ok = std::abs(mean - 0.5) <= 1.5e-3 &&
                    std::abs(var - 1.0 / 12.0) <= 1e-3 &&
                    zmean <= 5e-3 && std::abs(r2mean - 1.0) <= 5e-3;
    add_check(rep, progress, "prng_moments", ok,
              "uniform mean = " + fmt(mean) + ", var = " + fmt(var) +
                  "; |mean z| = " + fmt(zmean) + ", mean |z|^2 = " +
                  fmt(r2mean));
  }
  {
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t cell = 0; cell < 100; ++cell)
      for (std::uint64_t m = 0; m < 100; ++m)
        seen.insert(derive_seed(20260823, cell, m));
    add_check(rep, progress, "seed_derivation_collisions",
              seen.size() == 10000,
              std::to_string(seen.size()) + " distinct seeds from 10000 "
                                            "(cell, trajectory) pairs");
  }

  // --- rank-correlation self-test -------------------------------------------
  {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> up{2, 4, 6, 8, 10};
    const std::vector<double> down{10, 8, 6, 4, 2};
    const std::vector<double> tx{1, 1, 2}, ty{3, 5, 4};
    const double r_up = spearman(x, up);
    const double r_down = spearman(x, down);
    const double r_tie = spearman(tx, ty);
    add_check(rep, progress, "spearman_selftest",
              r_up == 1.0 && r_down == -1.0 && std::abs(r_tie) <= 1e-15,
              "monotone " + fmt(r_up) + ", reversed " + fmt(r_down) +
                  ", tied-neutral " + fmt(r_tie));
  }

  // --- mutation canaries ----------------------------------------------------
  {
    SpectralData broken = cases[0].sd;
    broken.right.col(5) *= 2.0;  // gauge violated, left rows untouched
    const double res =
        (broken.left_rows * broken.right -
         Matrix::Identity(broken.size(), broken.size()))
            .cwiseAbs()
            .maxCoeff();
    add_check(rep, progress, "canary_gauge_violation_detected", res > 1e-6,
              "biorthonormality residual after mutation = " + fmt(res));
  }
  {
    const LindbladSpec& spec = cases[0].mb.spec;
    const Matrix good = build_superoperator(spec);
    const Matrix bad = wrong_convention_superoperator(spec);
    Rng rng(660001);
    double good_res = 0.0, bad_res = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix rho = random_density_matrix(spec.dim(), rng);
      const Vector ref = vectorize(apply_liouvillian(spec, rho));
      good_res = std::max(good_res,
                          (good * vectorize(rho) - ref).norm() / ref.norm());
      bad_res = std::max(bad_res,
                         (bad * vectorize(rho) - ref).norm() / ref.norm());
    }
    add_check(rep, progress, "canary_vectorization_order_detected",
              good_res <= 1e-12 && bad_res > 1e-3,
              "correct-builder residual " + fmt(good_res) +
                  ", swapped-convention residual " + fmt(bad_res));
  }

  rep.all_passed = true;
  for (const auto& c : rep.checks) rep.all_passed = rep.all_passed && c.passed;
  return rep;
}

Json validation_to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return Json{{"all_passed", report.all_passed},
              {"code_version", kCodeVersion},
              {"prng", kPrngAlgorithm},
              {"time", utc_timestamp()},
              {"checks", std::move(checks)}};
}

int cmd_validate(const std::string& out_dir) {
  const ValidationReport rep = run_validation(&std::cout);
  if (!out_dir.empty())
    save_json_file(out_dir + "/validation_report.json",
                   validation_to_json(rep));
  std::cout << (rep.all_passed ? "validation passed"
                               : "validation FAILED")
            << " (" << rep.checks.size() << " checks)\n";
  return rep.all_passed ? 0 : 1;
}

}  // namespace liouvtraj
