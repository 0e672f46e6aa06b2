#include "liouvtraj/observables.hpp"

#include <cmath>

#include "liouvtraj/basis.hpp"

namespace liouvtraj {

namespace {

double real_spectral_center(const SpectralData& sd) {
  const Complex center = sd.spectral_center;
  ensure(std::abs(center.imag()) <= 1e-10 * std::max(1.0, std::abs(center)),
         "center_of_mass: spectral center has a large imaginary part");
  ensure(std::abs(center.real()) > 1e-300,
         "center_of_mass: spectral center is zero (no dissipation?)");
  return center.real();
}

}  // namespace

OverlapCoefficients overlaps(const SpectralData& sd, const Matrix& rho) {
  require(rho.rows() == sd.dim && rho.cols() == sd.dim,
          "overlaps: dimension mismatch");
  OverlapCoefficients co;
  co.c.noalias() = sd.left_rows * vectorize(rho);
  co.d.noalias() = sd.right.transpose() * vectorize(rho.transpose());
  co.purity = (rho * rho).trace().real();
  return co;
}

Vector uniformize(const Vector& p_raw, const SpectralData& sd) {
  require(p_raw.size() == sd.size(), "uniformize: size mismatch");
  Vector p = p_raw;
  for (const auto& group : sd.groups) {
    if (group.size() < 2) continue;
    Complex mean{0.0, 0.0};
    for (long i : group) mean += p_raw(i);
    mean /= static_cast<double>(group.size());
    for (long i : group) p(i) = mean;
  }
  return p;
}

double center_of_mass(const Vector& p, const SpectralData& sd) {
  require(p.size() == sd.size(), "center_of_mass: size mismatch");
  const Complex weighted = (p.array() * sd.eigenvalues.array()).sum();
  const Complex value = weighted / real_spectral_center(sd);
  ensure(std::abs(value.imag()) < 1e-8,
         "center_of_mass: imaginary residue " +
             std::to_string(value.imag()) +
             " exceeds 1e-8 (conjugate pairing violated?)");
  return value.real();
}

double ipr(const Vector& p) { return p.squaredNorm(); }

double ipr_alt(const Vector& p) {
  const Complex s = (p.array() * p.array()).sum();
  ensure(std::abs(s.imag()) < 1e-8,
         "ipr_alt: imaginary residue exceeds 1e-8");
  return s.real();
}

QuasiDistribution quasiprobabilities(const OverlapCoefficients& co,
                                     const SpectralData& sd) {
  require(co.c.size() == sd.size() && co.d.size() == sd.size(),
          "quasiprobabilities: size mismatch");
  QuasiDistribution q;
  q.p_raw = co.c.cwiseProduct(co.d);
  q.p = uniformize(q.p_raw, sd);
  q.cm = center_of_mass(q.p, sd);
  q.ipr = ipr(q.p);
  q.ipr_alt = ipr_alt(q.p);
  q.purity_input = co.purity;
  q.p0 = q.p(sd.steady_index);
  return q;
}

SampleObservables sampled_observables(const SpectralData& sd,
                                      const Vector& psi) {
  const Matrix rho = psi * psi.adjoint();
  const QuasiDistribution q = quasiprobabilities(overlaps(sd, rho), sd);
  return {q.cm, q.ipr, q.p0};
}

double sampled_cm(const SpectralData& sd, const Vector& psi) {
  const Matrix rho = psi * psi.adjoint();
  const OverlapCoefficients co = overlaps(sd, rho);
  return center_of_mass(uniformize(co.c.cwiseProduct(co.d), sd), sd);
}

double pure_state_lambda_weight(const LindbladSpec& spec, const Vector& psi) {
  require(psi.size() == spec.dim(),
          "pure_state_lambda_weight: dimension mismatch");
  double acc = 0.0;
  for (const auto& ch : spec.channels) {
    const Vector lpsi = ch.jump * psi;
    const Complex expect = psi.dot(lpsi);  // <psi|L|psi>
    acc += ch.gamma * (std::norm(expect) - lpsi.squaredNorm());
  }
  return acc;
}

BoundReport bound_check(const std::vector<double>& p0_re,
                        const std::vector<double>& ipr_values, double p_ss) {
  require(!p0_re.empty() && p0_re.size() == ipr_values.size(),
          "bound_check: empty or mismatched ensemble");
  const double m = static_cast<double>(p0_re.size());
  BoundReport rep;
  rep.p_ss = p_ss;
  double sum_p0 = 0.0, sum_ipr = 0.0;
  for (std::size_t i = 0; i < p0_re.size(); ++i) {
    sum_p0 += p0_re[i];
    sum_ipr += ipr_values[i];
  }
  rep.mean_p0 = sum_p0 / m;
  rep.mean_ipr = sum_ipr / m;
  double var_p0 = 0.0, var_ipr = 0.0;
  for (std::size_t i = 0; i < p0_re.size(); ++i) {
    var_p0 += (p0_re[i] - rep.mean_p0) * (p0_re[i] - rep.mean_p0);
    var_ipr += (ipr_values[i] - rep.mean_ipr) * (ipr_values[i] - rep.mean_ipr);
  }
  const double denom = p0_re.size() > 1 ? m - 1.0 : 1.0;
  rep.se_p0 = std::sqrt(var_p0 / denom / m);
  rep.se_ipr = std::sqrt(var_ipr / denom / m);
  rep.p0_margin = 3.0 * rep.se_p0 - std::abs(rep.mean_p0 - p_ss);
  rep.ipr_margin = rep.mean_ipr + 3.0 * rep.se_ipr - p_ss * p_ss;
  rep.p0_matches = rep.p0_margin >= 0.0;
  rep.ipr_bound_ok = rep.ipr_margin >= 0.0;
  return rep;
}

}  // namespace liouvtraj
