// random.hpp: random instances for the property and verification suites.

#pragma once

#include "twotls/core.hpp"
#include "twotls/models.hpp"

#include <random>

namespace twotls {

/// Haar-like random pure state: normalized complex Gaussian vector.
inline UniverseState<double> random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector4c<double> psi;
  for (int k = 0; k < 4; ++k) psi(k) = {g(rng), g(rng)};
  return UniverseState<double>::normalized(psi);
}

inline Couplings<double> random_couplings(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Couplings<double> h;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) h(j, k) = u(rng);
  return h;
}

inline HamiltonianSpec<double> random_hamiltonian(std::mt19937_64& rng, bool coupled = true) {
  std::uniform_real_distribution<double> gap(0.1, 2.0);
  const double wa = gap(rng);
  const double wb = gap(rng);
  return assemble_hamiltonian(wa, wb, coupled ? random_couplings(rng) : Couplings<double>(Couplings<double>::Zero()));
}

inline Configuration<double> random_configuration(std::mt19937_64& rng, bool coupled = true) {
  UniverseState<double> state = random_state(rng);
  return {state, random_hamiltonian(rng, coupled)};
}

struct ControlInstance {
  ControlCaseState<double> state;
  NumberConservingSpec<double> spec;
  double omega_a = 1.0;
  double omega_b = 1.0;

  HamiltonianSpec<double> hamiltonian() const { return number_conserving_hamiltonian(omega_a, omega_b, spec); }
  Configuration<double> configuration() const { return {UniverseState<double>{state.embed()}, hamiltonian()}; }
};

/// Lambda in (-1,1)^2, Delta in (-1,1), gaps in (0.1, 2), psi_3 = 0.
inline ControlInstance random_control_instance(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.1, 2.0);
  ControlInstance inst;
  Vector4c<double> psi;
  psi << Complex<double>(g(rng), g(rng)), Complex<double>(g(rng), g(rng)), Complex<double>(g(rng), g(rng)), 0.0;
  psi /= psi.norm();
  inst.state = ControlCaseState<double>::from_amplitudes(psi);
  inst.spec = {Complex<double>(u(rng), u(rng)), u(rng)};
  inst.omega_a = gap(rng);
  inst.omega_b = gap(rng);
  return inst;
}

}  // namespace twotls
