// iel.hpp: internal energy laws: maps from a configuration to a pair of
// subsystem energies (U^A, U^B).
//
// Two laws ship with the library:
//   bare  U^j = omega^j * rho11^j
//   rc    U^j = rho11^j * Im(rho_dot01^j / rho01^j)   ("rotating coherence")
// The rc law reads nothing but the 1-extended state of subsystem j. The bare law
// additionally reads omega^j from the configuration.

#pragma once

#include "twotls/core.hpp"
#include "twotls/dynamics.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twotls {

enum class Law { bare, rc };

/// Below this coherence magnitude the rc frequency is reported as undefined.
inline constexpr double kRcCoherenceCutoff = 1e-12;

std::optional<Law> parse_law(const std::string& name);
std::string law_name(Law law);

template <typename Scalar = double>
struct EnergyPair {
  Scalar u_a{0};
  Scalar u_b{0};

  Scalar total() const { return u_a + u_b; }
  Scalar operator[](Subsystem s) const { return s == Subsystem::A ? u_a : u_b; }
};

template <typename Scalar = double>
struct ConsistencyAudit {
  Scalar u_a{0};
  Scalar u_b{0};
  Scalar mean_h{0};
  Scalar defect{0};
};

/// Im(rho_dot01 / rho01), evaluated without forming the quotient.
template <typename Scalar>
Scalar rc_frequency(const ExtendedStateRep<Scalar>& ext, Subsystem subsystem = Subsystem::A) {
  const Scalar c2 = ext.re_c * ext.re_c + ext.im_c * ext.im_c;
  if (!(std::sqrt(c2) >= Scalar(kRcCoherenceCutoff))) {
    throw RcUndefinedError(subsystem, "rc law undefined: vanishing coherence of subsystem " + to_string(subsystem));
  }
  return (ext.re_c * ext.im_cdot - ext.im_c * ext.re_cdot) / c2;
}

template <typename Scalar>
Scalar bare_gap(const HamiltonianSpec<Scalar>& h, Subsystem s) {
  return s == Subsystem::A ? h.omega_a : h.omega_b;
}

template <typename Scalar>
Scalar iel_energy(Law law, const Configuration<Scalar>& config, Subsystem s) {
  const ExtendedStateRep<Scalar> ext = extended_state(config, s);
  switch (law) {
    case Law::bare:
      return bare_gap(config.hamiltonian, s) * ext.p1;
    case Law::rc:
      return ext.p1 * rc_frequency(ext, s);
  }
  throw std::logic_error("iel_energy: unknown law");
}

template <typename Scalar>
EnergyPair<Scalar> iel_evaluate(Law law, const Configuration<Scalar>& config) {
  return {iel_energy(law, config, Subsystem::A), iel_energy(law, config, Subsystem::B)};
}

/// Rescaled bare Hamiltonian whose average under rho^j reproduces U^j:
/// (rho11 omega)^-1 U H^j, i.e. (U / rho11) |1><1|.
template <typename Scalar>
Matrix2c<Scalar> effective_hamiltonian(Law law, const Configuration<Scalar>& config, Subsystem s) {
  const Scalar p1 = std::real(partial_trace(config.state, s)(1, 1));
  if (!(p1 > Scalar(0))) {
    throw std::domain_error("effective_hamiltonian: subsystem " + to_string(s) + " has no excited population");
  }
  const Scalar u = iel_energy(law, config, s);
  Matrix2c<Scalar> out = Matrix2c<Scalar>::Zero();
  out(1, 1) = u / p1;
  return out;
}

template <typename Scalar>
ConsistencyAudit<Scalar> consistency_audit(Law law, const Configuration<Scalar>& config) {
  const EnergyPair<Scalar> e = iel_evaluate(law, config);
  const Scalar mean_h = mean_energy(config);
  return {e.u_a, e.u_b, mean_h, e.u_a + e.u_b - mean_h};
}

/// Named laws over double-precision configurations. Open for extension.
class LawRegistry {
 public:
  using Evaluator = std::function<EnergyPair<double>(const Configuration<double>&)>;

  /// Registry holding "bare" and "rc".
  static LawRegistry with_builtin_laws();

  void add(const std::string& name, Evaluator evaluator);
  bool contains(const std::string& name) const;
  const Evaluator& at(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Evaluator> laws_;
};

}  // namespace twotls
