// dynamics.hpp: closed-universe evolution, reduced states and their time derivatives.

#pragma once

#include "twotls/core.hpp"

#include <Eigen/Eigenvalues>

namespace twotls {

template <typename Scalar>
using DensityMatrix2 = Matrix2c<Scalar>;

/// Coordinates of a 1-extended state (rho, rho_dot) of one subsystem.
template <typename Scalar = double>
struct ExtendedStateRep {
  Scalar re_c{0};
  Scalar im_c{0};
  Scalar p1{0};
  Scalar re_cdot{0};
  Scalar im_cdot{0};
  Scalar p1dot{0};

  Complex<Scalar> coherence() const { return {re_c, im_c}; }
  Complex<Scalar> coherence_dot() const { return {re_cdot, im_cdot}; }

  Eigen::Matrix<Scalar, 6, 1> to_vector() const {
    Eigen::Matrix<Scalar, 6, 1> v;
    v << re_c, im_c, p1, re_cdot, im_cdot, p1dot;
    return v;
  }
};

using ExtendedStateRepd = ExtendedStateRep<double>;

/// -i H psi.
template <typename Scalar>
Vector4c<Scalar> schrodinger_rhs(const Vector4c<Scalar>& psi, const Matrix4c<Scalar>& h) {
  return Complex<Scalar>(0, -1) * (h * psi);
}

template <typename Scalar>
Vector4c<Scalar> schrodinger_rhs(const UniverseState<Scalar>& state, const HamiltonianSpec<Scalar>& h) {
  return schrodinger_rhs(state.psi, h.matrix);
}

/// exp(-iHt) for a fixed Hermitian H, diagonalized once.
template <typename Scalar = double>
class Propagator {
 public:
  explicit Propagator(const Matrix4c<Scalar>& h) : solver_(h) {
    if (solver_.info() != Eigen::Success) throw std::runtime_error("Propagator: eigendecomposition failed");
  }
  explicit Propagator(const HamiltonianSpec<Scalar>& h) : Propagator(h.matrix) {}

  Vector4c<Scalar> apply(const Vector4c<Scalar>& psi, Scalar t) const {
    const auto& v = solver_.eigenvectors();
    Vector4c<Scalar> coeffs = v.adjoint() * psi;
    for (int k = 0; k < 4; ++k) coeffs(k) *= std::polar(Scalar(1), -solver_.eigenvalues()(k) * t);
    return v * coeffs;
  }

  UniverseState<Scalar> apply(const UniverseState<Scalar>& state, Scalar t) const {
    return UniverseState<Scalar>{apply(state.psi, t)};
  }

  const Eigen::Matrix<Scalar, 4, 1>& energies() const { return solver_.eigenvalues(); }

 private:
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> solver_;
};

template <typename Scalar>
UniverseState<Scalar> propagate(const UniverseState<Scalar>& state, const HamiltonianSpec<Scalar>& h, Scalar t) {
  return Propagator<Scalar>(h).apply(state, t);
}

/// Reduced 2x2 matrix of a 4x4 operator on the product basis.
template <typename Scalar>
Matrix2c<Scalar> partial_trace(const Matrix4c<Scalar>& rho, Subsystem keep) {
  Matrix2c<Scalar> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (keep == Subsystem::A) {
        out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
      } else {
        out(a, b) = rho(a, b) + rho(2 + a, 2 + b);
      }
    }
  }
  return out;
}

template <typename Scalar>
Matrix4c<Scalar> projector(const Vector4c<Scalar>& psi) {
  return psi * psi.adjoint();
}

template <typename Scalar>
DensityMatrix2<Scalar> partial_trace(const Vector4c<Scalar>& psi, Subsystem keep) {
  return partial_trace(projector(psi), keep);
}

template <typename Scalar>
DensityMatrix2<Scalar> partial_trace(const UniverseState<Scalar>& state, Subsystem keep) {
  return partial_trace(state.psi, keep);
}

/// Tr_other(-i[H, rho]) for rho = |psi><psi|.
template <typename Scalar>
Matrix2c<Scalar> rho_dot_local(const Vector4c<Scalar>& psi, const Matrix4c<Scalar>& h, Subsystem subsystem) {
  const Matrix4c<Scalar> rho = projector(psi);
  const Matrix4c<Scalar> rho_dot = Complex<Scalar>(0, -1) * (h * rho - rho * h);
  return partial_trace(rho_dot, subsystem);
}

template <typename Scalar>
Matrix2c<Scalar> rho_dot_local(const Configuration<Scalar>& config, Subsystem subsystem) {
  return rho_dot_local(config.state.psi, config.hamiltonian.matrix, subsystem);
}

template <typename Scalar>
ExtendedStateRep<Scalar> pack_extended_state(const Matrix2c<Scalar>& rho, const Matrix2c<Scalar>& rho_dot) {
  return {std::real(rho(0, 1)),     std::imag(rho(0, 1)),     std::real(rho(1, 1)),
          std::real(rho_dot(0, 1)), std::imag(rho_dot(0, 1)), std::real(rho_dot(1, 1))};
}

template <typename Scalar>
ExtendedStateRep<Scalar> extended_state(const Vector4c<Scalar>& psi, const Matrix4c<Scalar>& h, Subsystem subsystem) {
  return pack_extended_state<Scalar>(partial_trace(psi, subsystem), rho_dot_local(psi, h, subsystem));
}

template <typename Scalar>
ExtendedStateRep<Scalar> extended_state(const Configuration<Scalar>& config, Subsystem subsystem) {
  return extended_state(config.state.psi, config.hamiltonian.matrix, subsystem);
}

/// Hermitian, unit trace and positive semidefinite, each within tol.
template <typename Scalar>
bool is_density_matrix(const DensityMatrix2<Scalar>& rho, Scalar tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace() - Complex<Scalar>(1)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix2c<Scalar>> es(rho);
  return es.eigenvalues().minCoeff() >= -tol;
}

template <typename Scalar>
bool is_traceless_hermitian(const Matrix2c<Scalar>& m, Scalar tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol && std::abs(m.trace()) <= tol;
}

}  // namespace twotls
