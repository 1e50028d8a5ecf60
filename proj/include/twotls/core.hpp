// core.hpp: fixed-basis algebra of a universe made of two two-level systems.
//
// Basis convention: the product basis |00>, |01>, |10>, |11> in binary order,
// with the first digit labelling subsystem A and the second subsystem B.
// Each factor is ordered ground state first.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twotls {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

template <typename Scalar>
using Vector4c = Eigen::Matrix<Complex<Scalar>, 4, 1>;

template <typename Scalar>
using Couplings = Eigen::Matrix<Scalar, 3, 3>;

/// Number of real coordinates in a configuration representation.
inline constexpr int kRepSize = 19;

template <typename Scalar>
using RepVector = Eigen::Matrix<Scalar, kRepSize, 1>;

enum class Axis { x = 0, y = 1, z = 2 };
enum class Subsystem { A, B };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

/// Raised when an input violates a documented invariant or precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The rotating-coherence law is evaluated where a local coherence vanishes.
class RcUndefinedError : public std::domain_error {
 public:
  RcUndefinedError(Subsystem subsystem, const std::string& what)
      : std::domain_error(what), subsystem_(subsystem) {}
  Subsystem subsystem() const noexcept { return subsystem_; }

 private:
  Subsystem subsystem_;
};

/// Pauli operator on one factor, basis (|0>, |1>).
///
/// sigma_z = diag(-1, +1) so that the excited state carries the positive
/// eigenvalue; sigma_x = |0><1| + |1><0| and sigma_y = i|0><1| - i|1><0|.
/// With this choice sigma_x * sigma_y = i sigma_z.
template <typename Scalar = double>
Matrix2c<Scalar> pauli(Axis axis) {
  using C = Complex<Scalar>;
  Matrix2c<Scalar> m;
  switch (axis) {
    case Axis::x:
      m << C(0), C(1), C(1), C(0);
      break;
    case Axis::y:
      m << C(0), C(0, 1), C(0, -1), C(0);
      break;
    case Axis::z:
      m << C(-1), C(0), C(0), C(1);
      break;
  }
  return m;
}

/// |1><0|, the raising operator on one factor.
template <typename Scalar = double>
Matrix2c<Scalar> sigma_plus() {
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(1, 0) = Scalar(1);
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> sigma_minus() {
  return sigma_plus<Scalar>().adjoint();
}

/// op_A (x) op_B on the product basis.
template <typename Scalar>
Matrix4c<Scalar> tensor(const Matrix2c<Scalar>& op_a, const Matrix2c<Scalar>& op_b) {
  return Eigen::kroneckerProduct(op_a, op_b).eval();
}

/// Sum of h(j,k) sigma_j (x) sigma_k. No identity components by construction.
template <typename Scalar>
Matrix4c<Scalar> interaction_matrix(const Couplings<Scalar>& h) {
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
  for (Axis j : kAxes) {
    for (Axis k : kAxes) {
      const Scalar c = h(static_cast<int>(j), static_cast<int>(k));
      if (c != Scalar(0)) m += c * tensor(pauli<Scalar>(j), pauli<Scalar>(k));
    }
  }
  return m;
}

/// diag(0, omega_b, omega_a, omega_a + omega_b): H^A + H^B.
template <typename Scalar>
Matrix4c<Scalar> bare_matrix(Scalar omega_a, Scalar omega_b) {
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
  m(1, 1) = omega_b;
  m(2, 2) = omega_a;
  m(3, 3) = omega_a + omega_b;
  return m;
}

/// Unvalidated assembly, used on displaced coordinates during differentiation.
template <typename Scalar>
Matrix4c<Scalar> hamiltonian_matrix(Scalar omega_a, Scalar omega_b, const Couplings<Scalar>& h) {
  Matrix4c<Scalar> m = bare_matrix(omega_a, omega_b) + interaction_matrix(h);
  // Exact Hermiticity regardless of rounding in the Pauli products.
  return ((m + m.adjoint()) * Scalar(0.5)).eval();
}

template <typename Scalar = double>
struct HamiltonianSpec {
  Scalar omega_a{1};
  Scalar omega_b{1};
  Couplings<Scalar> h = Couplings<Scalar>::Zero();
  Matrix4c<Scalar> matrix = bare_matrix(Scalar(1), Scalar(1));

  Matrix4c<Scalar> bare() const { return bare_matrix(omega_a, omega_b); }
  Matrix4c<Scalar> interaction() const { return interaction_matrix(h); }
};

template <typename Scalar>
HamiltonianSpec<Scalar> assemble_hamiltonian(Scalar omega_a, Scalar omega_b, const Couplings<Scalar>& h) {
  if (!(omega_a > Scalar(0)) || !(omega_b > Scalar(0))) {
    throw ValidationError("assemble_hamiltonian: energy gaps must be positive");
  }
  if (!h.allFinite()) throw ValidationError("assemble_hamiltonian: non-finite coupling");
  return {omega_a, omega_b, h, hamiltonian_matrix(omega_a, omega_b, h)};
}

template <typename Scalar = double>
struct UniverseState {
  Vector4c<Scalar> psi = Vector4c<Scalar>::UnitX();

  static UniverseState from_amplitudes(const Vector4c<Scalar>& amplitudes, Scalar tol = Scalar(1e-12)) {
    if (std::abs(amplitudes.squaredNorm() - Scalar(1)) > tol) {
      throw ValidationError("UniverseState: amplitudes are not normalized");
    }
    return UniverseState{amplitudes};
  }

  /// Normalizes first; throws on the zero vector.
  static UniverseState normalized(const Vector4c<Scalar>& amplitudes) {
    const Scalar n = amplitudes.norm();
    if (!(n > Scalar(0))) throw ValidationError("UniverseState: zero vector");
    return UniverseState{amplitudes / n};
  }
};

template <typename Scalar = double>
struct Configuration {
  UniverseState<Scalar> state;
  HamiltonianSpec<Scalar> hamiltonian;
};

/// The 19 real coordinates of a configuration.
template <typename Scalar = double>
struct ConfigRep {
  std::array<Scalar, 4> R{1, 0, 0, 0};
  std::array<Scalar, 4> theta{0, 0, 0, 0};
  Scalar omega_a{1};
  Scalar omega_b{1};
  Couplings<Scalar> h = Couplings<Scalar>::Zero();

  /// Flat layout: R0..R3, theta0..theta3, omega_a, omega_b, h_xx, h_xy, ..., h_zz.
  RepVector<Scalar> to_vector() const {
    RepVector<Scalar> v;
    for (int k = 0; k < 4; ++k) {
      v(k) = R[k];
      v(4 + k) = theta[k];
    }
    v(8) = omega_a;
    v(9) = omega_b;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) v(10 + 3 * j + k) = h(j, k);
    return v;
  }

  static ConfigRep from_vector(const RepVector<Scalar>& v) {
    ConfigRep rep;
    for (int k = 0; k < 4; ++k) {
      rep.R[k] = v(k);
      rep.theta[k] = v(4 + k);
    }
    rep.omega_a = v(8);
    rep.omega_b = v(9);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) rep.h(j, k) = v(10 + 3 * j + k);
    return rep;
  }
};

inline constexpr int kIndexR0 = 0;
inline constexpr int kIndexTheta0 = 4;
inline constexpr int kIndexOmegaA = 8;
inline constexpr int kIndexOmegaB = 9;
inline constexpr int kIndexCouplings = 10;

/// psi_k = R_k exp(i theta_k) on raw coordinates, without any normalization check.
template <typename Scalar>
Vector4c<Scalar> amplitudes_from_coords(const RepVector<Scalar>& x) {
  Vector4c<Scalar> psi;
  for (int k = 0; k < 4; ++k) {
    const Scalar phase = x(kIndexTheta0 + k);
    psi(k) = x(kIndexR0 + k) * Complex<Scalar>(std::cos(phase), std::sin(phase));
  }
  return psi;
}

template <typename Scalar>
Couplings<Scalar> couplings_from_coords(const RepVector<Scalar>& x) {
  Couplings<Scalar> h;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) h(j, k) = x(kIndexCouplings + 3 * j + k);
  return h;
}

template <typename Scalar>
Scalar wrap_phase(Scalar phi) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar w = std::fmod(phi, two_pi);
  if (w < Scalar(0)) w += two_pi;
  if (w >= two_pi) w = Scalar(0);
  return w;
}

template <typename Scalar>
void validate(const ConfigRep<Scalar>& rep, Scalar norm_tol = Scalar(1e-9)) {
  Scalar norm2(0);
  for (int k = 0; k < 4; ++k) {
    if (!(rep.R[k] >= Scalar(0))) throw ValidationError("ConfigRep: negative or non-finite modulus");
    norm2 += rep.R[k] * rep.R[k];
  }
  if (std::abs(norm2 - Scalar(1)) > norm_tol) throw ValidationError("ConfigRep: moduli not normalized");
  for (Scalar t : rep.theta) {
    if (!std::isfinite(t)) throw ValidationError("ConfigRep: non-finite phase");
  }
  if (!(rep.omega_a > Scalar(0)) || !(rep.omega_b > Scalar(0))) {
    throw ValidationError("ConfigRep: energy gaps must be positive");
  }
  if (!rep.h.allFinite()) throw ValidationError("ConfigRep: non-finite coupling");
}

template <typename Scalar>
Configuration<Scalar> rep_to_config(const ConfigRep<Scalar>& rep) {
  validate(rep);
  Vector4c<Scalar> psi;
  for (int k = 0; k < 4; ++k) psi(k) = std::polar(rep.R[k], rep.theta[k]);
  return {UniverseState<Scalar>{psi}, assemble_hamiltonian(rep.omega_a, rep.omega_b, rep.h)};
}

/// Polar coordinates of each amplitude, phases in [0, 2 pi). Zero amplitudes get phase 0.
template <typename Scalar>
ConfigRep<Scalar> config_to_rep(const Configuration<Scalar>& config) {
  ConfigRep<Scalar> rep;
  for (int k = 0; k < 4; ++k) {
    rep.R[k] = std::abs(config.state.psi(k));
    rep.theta[k] = rep.R[k] > Scalar(0) ? wrap_phase(std::arg(config.state.psi(k))) : Scalar(0);
  }
  rep.omega_a = config.hamiltonian.omega_a;
  rep.omega_b = config.hamiltonian.omega_b;
  rep.h = config.hamiltonian.h;
  return rep;
}

/// Signed distance between two phases, in (-pi, pi].
template <typename Scalar>
Scalar phase_difference(Scalar a, Scalar b) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar d = std::remainder(a - b, Scalar(2) * pi);
  if (d <= -pi) d += Scalar(2) * pi;
  return d;
}

/// Coordinates agree within tol once a single joint phase shift is removed.
template <typename Scalar>
bool rep_equivalent(const ConfigRep<Scalar>& a, const ConfigRep<Scalar>& b, Scalar tol) {
  const RepVector<Scalar> va = a.to_vector(), vb = b.to_vector();
  if ((va.template head<4>() - vb.template head<4>()).cwiseAbs().maxCoeff() > tol) return false;
  if ((va.template tail<11>() - vb.template tail<11>()).cwiseAbs().maxCoeff() > tol) return false;
  // Phases of vanishing moduli are arbitrary; the shift is read off the largest modulus.
  int ref = 0;
  for (int k = 1; k < 4; ++k)
    if (a.R[k] > a.R[ref]) ref = k;
  const Scalar shift = phase_difference(a.theta[ref], b.theta[ref]);
  for (int k = 0; k < 4; ++k) {
    if (a.R[k] <= tol) continue;
    if (std::abs(phase_difference(phase_difference(a.theta[k], b.theta[k]), shift)) > tol) return false;
  }
  return true;
}

/// Configurations are equal when the Hamiltonians agree entrywise and the states
/// agree up to a single global phase: | |<a|b>| - 1 | <= tol.
template <typename Scalar>
bool config_equal(const Configuration<Scalar>& a, const Configuration<Scalar>& b, Scalar tol) {
  const Scalar dh = (a.hamiltonian.matrix - b.hamiltonian.matrix).cwiseAbs().maxCoeff();
  if (dh > tol) return false;
  const Scalar overlap = std::abs(a.state.psi.dot(b.state.psi));
  return std::abs(overlap - Scalar(1)) <= tol;
}

/// <psi|H|psi>; Hermitian H makes the imaginary part a rounding residue.
template <typename Scalar>
Scalar expectation(const Vector4c<Scalar>& psi, const Matrix4c<Scalar>& op) {
  return std::real(psi.dot(op * psi));
}

template <typename Scalar>
Scalar mean_energy(const Configuration<Scalar>& config) {
  return expectation(config.state.psi, config.hamiltonian.matrix);
}

using ConfigRepd = ConfigRep<double>;
using Configurationd = Configuration<double>;
using HamiltonianSpecd = HamiltonianSpec<double>;
using UniverseStated = UniverseState<double>;

inline std::string to_string(Subsystem s) { return s == Subsystem::A ? "A" : "B"; }

}  // namespace twotls
