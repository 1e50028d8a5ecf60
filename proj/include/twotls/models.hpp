// models.hpp: number-conserving interactions and closed forms for the
// no-double-excitation sector (psi_3 = 0).

#pragma once

#include "twotls/core.hpp"

namespace twotls {

/// Lambda s+^A s-^B + conj(Lambda) s-^A s+^B + Delta sz^A sz^B.
template <typename Scalar = double>
struct NumberConservingSpec {
  Complex<Scalar> lambda{0};
  Scalar delta{0};

  static NumberConservingSpec exchange(Complex<Scalar> l) { return {l, Scalar(0)}; }
  static NumberConservingSpec dephasing(Scalar d) { return {Complex<Scalar>(0), d}; }
};

/// State in span{|00>, |01>, |10>}: psi_a is the |10> amplitude, psi_b the |01> one.
template <typename Scalar = double>
struct ControlCaseState {
  Complex<Scalar> psi0{1};
  Complex<Scalar> psi_a{0};
  Complex<Scalar> psi_b{0};

  Scalar norm2() const { return std::norm(psi0) + std::norm(psi_a) + std::norm(psi_b); }

  /// (psi0, psi_b, psi_a, 0) on the binary product basis.
  Vector4c<Scalar> embed() const {
    Vector4c<Scalar> psi;
    psi << psi0, psi_b, psi_a, Complex<Scalar>(0);
    return psi;
  }

  static ControlCaseState from_amplitudes(const Vector4c<Scalar>& psi) { return {psi(0), psi(2), psi(1)}; }
};

using NumberConservingSpecd = NumberConservingSpec<double>;
using ControlCaseStated = ControlCaseState<double>;

/// Pauli-table coefficients of the number-conserving interaction.
/// s+ = (sx + i sy)/2 with this basis' sy, hence h_xy = -h_yx = Im(Lambda)/2.
template <typename Scalar>
Couplings<Scalar> h_num(const NumberConservingSpec<Scalar>& spec) {
  Couplings<Scalar> h = Couplings<Scalar>::Zero();
  const Scalar re = std::real(spec.lambda) / Scalar(2);
  const Scalar im = std::imag(spec.lambda) / Scalar(2);
  h(0, 0) = re;
  h(1, 1) = re;
  h(0, 1) = im;
  h(1, 0) = -im;
  h(2, 2) = spec.delta;
  return h;
}

template <typename Scalar>
HamiltonianSpec<Scalar> number_conserving_hamiltonian(Scalar omega_a, Scalar omega_b,
                                                      const NumberConservingSpec<Scalar>& spec) {
  return assemble_hamiltonian(omega_a, omega_b, h_num(spec));
}

/// Total excitation number N^A + N^B = diag(0, 1, 1, 2).
template <typename Scalar = double>
Matrix4c<Scalar> number_operator() {
  Matrix4c<Scalar> n = Matrix4c<Scalar>::Zero();
  n(1, 1) = Scalar(1);
  n(2, 2) = Scalar(1);
  n(3, 3) = Scalar(2);
  return n;
}

/// Closed-form local rho_dot for psi_3 = 0 under H^A + H^B + H^num.
template <typename Scalar>
Matrix2c<Scalar> control_rho_dot_analytic(const ControlCaseState<Scalar>& s, const NumberConservingSpec<Scalar>& spec,
                                          Scalar omega_a, Scalar omega_b, Subsystem subsystem) {
  using C = Complex<Scalar>;
  const C i(0, 1);
  const C l = spec.lambda;
  const Scalar two_delta = Scalar(2) * spec.delta;
  const Scalar flow = Scalar(2) * std::imag(l * std::conj(s.psi_a) * s.psi_b);

  C coherence;
  Scalar pop;
  if (subsystem == Subsystem::A) {
    coherence = i * s.psi0 * (std::conj(l) * std::conj(s.psi_b) + (omega_a - two_delta) * std::conj(s.psi_a));
    pop = flow;
  } else {
    coherence = i * s.psi0 * (l * std::conj(s.psi_a) + (omega_b - two_delta) * std::conj(s.psi_b));
    pop = -flow;
  }
  Matrix2c<Scalar> m;
  m << C(-pop), coherence, std::conj(coherence), C(pop);
  return m;
}

template <typename Scalar>
struct RcEnergies {
  Scalar u_a{0};
  Scalar u_b{0};
  Scalar u_total{0};
};

/// Closed-form rotating-coherence energies for psi_3 = 0; needs both excited amplitudes nonzero.
template <typename Scalar>
RcEnergies<Scalar> rc_energies_analytic(const ControlCaseState<Scalar>& s, const NumberConservingSpec<Scalar>& spec,
                                        Scalar omega_a, Scalar omega_b, Scalar cutoff = Scalar(1e-12)) {
  if (std::abs(s.psi0 * s.psi_a) < cutoff) throw RcUndefinedError(Subsystem::A, "rc_energies_analytic: vanishing coherence of A");
  if (std::abs(s.psi0 * s.psi_b) < cutoff) throw RcUndefinedError(Subsystem::B, "rc_energies_analytic: vanishing coherence of B");
  const Scalar cross = std::real(spec.lambda * s.psi_b * std::conj(s.psi_a));
  const Scalar na = std::norm(s.psi_a);
  const Scalar nb = std::norm(s.psi_b);
  const Scalar ua = na * (omega_a - Scalar(2) * spec.delta) + cross;
  const Scalar ub = nb * (omega_b - Scalar(2) * spec.delta) + cross;
  const Scalar total = na * omega_a + nb * omega_b + Scalar(2) * cross -
                       Scalar(2) * (Scalar(1) - std::norm(s.psi0)) * spec.delta;
  return {ua, ub, total};
}

template <typename Scalar>
Scalar mean_energy_analytic(const ControlCaseState<Scalar>& s, const NumberConservingSpec<Scalar>& spec,
                            Scalar omega_a, Scalar omega_b) {
  const Scalar cross = std::real(spec.lambda * std::conj(s.psi_a) * s.psi_b);
  return std::norm(s.psi_a) * omega_a + std::norm(s.psi_b) * omega_b + Scalar(2) * cross -
         Scalar(2) * (Scalar(1) - std::norm(s.psi0)) * spec.delta + spec.delta;
}

}  // namespace twotls
