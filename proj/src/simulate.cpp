#include "twotls/simulate.hpp"

#include <charconv>
#include <cmath>

namespace twotls {

void SimulationParams::validate() const {
  if (!(omega_a > 0.0) || !(omega_b > 0.0)) throw ValidationError("simulate: energy gaps must be positive");
  if (!std::isfinite(std::real(lambda)) || !std::isfinite(std::imag(lambda)) || !std::isfinite(delta)) {
    throw ValidationError("simulate: interaction parameters must be finite");
  }
  if (!std::isfinite(alpha)) throw ValidationError("simulate: alpha must be finite");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ValidationError("simulate: t_max must be finite and non-negative");
  if (n_steps < 1) throw ValidationError("simulate: n_steps must be at least 1");
}

std::optional<double> TrajectoryPoint::u_total() const {
  if (u_a && u_b) return *u_a + *u_b;
  return std::nullopt;
}

std::optional<double> TrajectoryPoint::defect() const {
  if (auto total = u_total()) return *total - mean_h;
  return std::nullopt;
}

UniverseState<double> simulation_initial_state(double alpha) {
  Vector4c<double> psi;
  psi << 1.0, 1.0, 1.0, alpha;
  return UniverseState<double>::normalized(psi);
}

std::vector<TrajectoryPoint> simulate_trajectory(const SimulationParams& params) {
  params.validate();
  const HamiltonianSpec<double> h =
      number_conserving_hamiltonian(params.omega_a, params.omega_b, NumberConservingSpec<double>{params.lambda, params.delta});
  const UniverseState<double> initial = simulation_initial_state(params.alpha);
  const Propagator<double> propagator(h);

  std::vector<TrajectoryPoint> points;
  points.reserve(params.n_steps + 1);
  for (std::size_t i = 0; i <= params.n_steps; ++i) {
    TrajectoryPoint p;
    p.t = params.t_max * static_cast<double>(i) / static_cast<double>(params.n_steps);
    const Configuration<double> config{propagator.apply(initial, p.t), h};
    p.mean_h = mean_energy(config);
    for (Subsystem s : {Subsystem::A, Subsystem::B}) {
      try {
        const double u = iel_energy(params.law, config, s);
        (s == Subsystem::A ? p.u_a : p.u_b) = u;
      } catch (const RcUndefinedError& e) {
        if (!p.diagnostic.empty()) p.diagnostic += "; ";
        p.diagnostic += e.what();
      }
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points) {
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << kTrajectoryHeader << '\n';
  for (const TrajectoryPoint& p : points) {
    out << format_number(p.t) << ',' << cell(p.u_a) << ',' << cell(p.u_b) << ',' << cell(p.u_total()) << ','
        << format_number(p.mean_h) << ',' << cell(p.defect()) << '\n';
  }
}

}  // namespace twotls
