// simulate.hpp: energy trajectories under H^A + H^B + H^num for the initial
// state |psi(0)> ~ |00> + |01> + |10> + alpha |11>.

#pragma once

#include "twotls/iel.hpp"
#include "twotls/models.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace twotls {

struct SimulationParams {
  double omega_a = 1.0;
  double omega_b = 0.85;
  Complex<double> lambda{0.83, 0.41};
  double delta = 0.0;
  double alpha = 0.0;
  double t_max = 20.0;
  std::size_t n_steps = 1000;
  Law law = Law::rc;

  /// Throws ValidationError on a parameter outside its domain.
  void validate() const;
};

struct TrajectoryPoint {
  double t = 0.0;
  std::optional<double> u_a;
  std::optional<double> u_b;
  double mean_h = 0.0;
  /// Set when the law is undefined at this time.
  std::string diagnostic;

  std::optional<double> u_total() const;
  std::optional<double> defect() const;
};

inline constexpr const char* kTrajectoryHeader = "t,u_a,u_b,u_total,mean_h,defect";

UniverseState<double> simulation_initial_state(double alpha);

/// n_steps + 1 uniformly spaced samples on [0, t_max].
std::vector<TrajectoryPoint> simulate_trajectory(const SimulationParams& params);

/// Header plus one line per point; undefined energies leave empty cells.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double value);

}  // namespace twotls
