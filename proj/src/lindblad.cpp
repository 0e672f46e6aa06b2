#include "liouvtraj/lindblad.hpp"

#include "liouvtraj/basis.hpp"

namespace liouvtraj {

void LindbladSpec::validate() const {
  require(hamiltonian.rows() == hamiltonian.cols(),
          "LindbladSpec: Hamiltonian must be square");
  const double hnorm = hamiltonian.norm();
  const double herm_err = (hamiltonian - hamiltonian.adjoint()).norm();
  require(herm_err <= 1e-10 * std::max(1.0, hnorm),
          "LindbladSpec: Hamiltonian is not Hermitian");
  for (const auto& ch : channels) {
    require(ch.gamma > 0.0, "LindbladSpec: rates must be positive");
    require(ch.jump.rows() == dim() && ch.jump.cols() == dim(),
            "LindbladSpec: jump operator dimension mismatch");
  }
}

Matrix apply_liouvillian(const LindbladSpec& spec, const Matrix& rho) {
  require(rho.rows() == spec.dim() && rho.cols() == spec.dim(),
          "apply_liouvillian: dimension mismatch");
  const Matrix& h = spec.hamiltonian;
  Matrix out = -kI * (h * rho - rho * h);
  for (const auto& ch : spec.channels) {
    const Matrix lrho = ch.jump * rho;
    const Matrix ldl = ch.jump.adjoint() * ch.jump;
    out += ch.gamma * (lrho * ch.jump.adjoint() -
                       0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Matrix build_superoperator(const LindbladSpec& spec) {
  spec.validate();
  const long d = spec.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& h = spec.hamiltonian;
  Matrix s = -kI * (kron(h, id) - kron(id, h.transpose()));
  for (const auto& ch : spec.channels) {
    const Matrix& l = ch.jump;
    const Matrix ldl = l.adjoint() * l;
    s += ch.gamma * (kron(l, l.conjugate()) - 0.5 * kron(ldl, id) -
                     0.5 * kron(id, ldl.transpose()));
  }
  return s;
}

Complex spectral_center_closed_form(const LindbladSpec& spec) {
  const double d = static_cast<double>(spec.dim());
  Complex acc{0.0, 0.0};
  for (const auto& ch : spec.channels) {
    const Complex tr_l = ch.jump.trace();
    const double tr_ldl = ch.jump.squaredNorm();  // tr(L^dag L)
    acc += ch.gamma * (std::norm(tr_l) - d * tr_ldl);
  }
  return acc / (d * d);
}

}  // namespace liouvtraj
