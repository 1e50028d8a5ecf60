// locality.hpp: solvability test for the linearized locality/consistency system.
//
// At a configuration representation X0 the 14x19 system
//
//   D sigma1^A . dX = 0        (6 rows)
//   D sigma1^B . dX = 0        (6 rows)
//   D sum R_k^2 . dX = 0       (1 row)
//   D <H>       . dX = dE      (1 row)
//
// is built from central-difference Jacobians and solved by least squares. A
// zero residual means <H> can be moved while both 1-extended states stay fixed
// to first order, so no law that depends on the extended states alone can
// reproduce <H> near X0.

#pragma once

#include "twotls/core.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace twotls {

inline constexpr int kSystemRows = 14;
inline constexpr int kTangentRows = 13;
inline constexpr int kTangentDim = 18;

using SystemMatrix = Eigen::Matrix<double, kSystemRows, kRepSize>;
using SystemVector = Eigen::Matrix<double, kSystemRows, 1>;
using TangentVector = Eigen::Matrix<double, kTangentDim, 1>;

/// A function value went non-finite while differentiating.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(int coordinate, const std::string& what) : std::runtime_error(what), coordinate_(coordinate) {}
  int coordinate() const noexcept { return coordinate_; }

 private:
  int coordinate_;
};

/// Two-point central differences: J(i,j) = [f_i(x + h e_j) - f_i(x - h e_j)] / 2h,
/// dividing by the representable step actually taken.
template <typename F, typename Derived>
Eigen::MatrixXd numerical_jacobian(F&& f, const Eigen::MatrixBase<Derived>& x0, double h_step) {
  if (!(h_step > 0.0)) throw ValidationError("numerical_jacobian: step must be positive");
  using Point = typename Derived::PlainObject;
  const Point base = x0;
  Eigen::MatrixXd jac;
  for (Eigen::Index j = 0; j < base.size(); ++j) {
    Point plus = base;
    Point minus = base;
    plus(j) += h_step;
    minus(j) -= h_step;
    const Eigen::VectorXd fp = f(plus);
    const Eigen::VectorXd fm = f(minus);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NonFiniteError(static_cast<int>(j),
                           "numerical_jacobian: non-finite value when displacing coordinate " + std::to_string(j));
    }
    if (j == 0) jac.resize(fp.size(), base.size());
    jac.col(j) = (fp - fm) / (plus(j) - minus(j));
  }
  return jac;
}

template <typename F>
Eigen::MatrixXd numerical_jacobian(F&& f, const ConfigRepd& x0, double h_step) {
  return numerical_jacobian(std::forward<F>(f), x0.to_vector(), h_step);
}

// Observables on raw 19-vectors; the moduli are not renormalized.
Eigen::Matrix<double, 6, 1> extended_state_coords(const RepVector<double>& x, Subsystem s);
double norm2_coords(const RepVector<double>& x);
double mean_energy_coords(const RepVector<double>& x);
/// (sigma1^A, sigma1^B, sum R^2, <H>) stacked in system row order.
SystemVector system_observables(const RepVector<double>& x);

/// Interior of the representation space: every R_k > 0, every theta_k in (0, 2 pi),
/// both gaps positive, moduli on the unit sphere within tol.
bool in_interior(const ConfigRepd& rep, double tol = 1e-12);

struct LinearSystem {
  SystemMatrix matrix = SystemMatrix::Zero();
  SystemVector rhs = SystemVector::Zero();
};

LinearSystem build_system(const ConfigRepd& x0, double h_step = 1e-6, double delta_e = 1.0);

struct LeastSquaresResult {
  Eigen::VectorXd solution;
  double residual_norm = 0.0;
};

/// Singular values below eps * max(rows, cols) * sigma_max are dropped.
inline double singular_value_cutoff(Eigen::Index rows, Eigen::Index cols) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

/// Minimum-norm minimizer of |M x - b| via SVD, with the achieved residual.
LeastSquaresResult solve_least_squares(const Eigen::MatrixXd& m, const Eigen::VectorXd& b);
LeastSquaresResult solve_least_squares(const LinearSystem& sys);

// ---------------------------------------------------------------------------
// Sampling and the experiment driver.

/// Identifier recorded in reports for the interior sampler below.
inline constexpr const char* kSamplerName = "uniform-cube-normalized-moduli";

/// Draws R ~ U(0,1)^4 (rejecting |R| < 1e-3, then normalized), theta ~ U(0, 2pi),
/// omega ~ U(0,1), h ~ U(-1,1); all intervals open.
ConfigRepd sample_interior_rep(std::mt19937_64& rng);

/// Deterministic draw for substream `index` of master seed `seed`.
ConfigRepd sample_interior_rep(std::uint64_t seed, std::uint64_t index = 0);

struct SampleResult {
  std::size_t index = 0;
  ConfigRepd rep;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  /// sum_k R_k dR_k of the returned solution.
  double radial_component = 0.0;
  bool solvable = false;
  bool failed = false;
  std::string error;
};

struct ExperimentOptions {
  std::size_t n = 5000;
  std::uint64_t seed = 0;
  double h_step = 1e-6;
  double threshold = 1e-12;
  double delta_e = 1.0;
  /// 0 picks the hardware concurrency.
  unsigned workers = 0;
};

struct SolvabilityReport {
  std::size_t n_samples = 0;
  double h_step = 0.0;
  double threshold = 0.0;
  double delta_e = 1.0;
  std::uint64_t seed = 0;
  std::string sampler = kSamplerName;
  std::size_t n_solvable = 0;
  std::size_t n_failed = 0;
  double max_residual = 0.0;
  double median_residual = 0.0;
  std::vector<std::size_t> failed_indices;
  std::vector<SampleResult> samples;
};

SampleResult evaluate_sample(std::size_t index, const ExperimentOptions& options);
SolvabilityReport run_experiment(const ExperimentOptions& options);

nlohmann::json to_json(const SolvabilityReport& report, bool include_samples = false);

// ---------------------------------------------------------------------------
// Hyperspherical parameterization of the moduli:
//   R1 = r cos a, R2 = r sin a cos b, R3 = r sin a sin b cos c, R0 = r sin a sin b sin c.

struct Hyperspherical {
  double r = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

Hyperspherical hyperspherical_forward(const std::array<double, 4>& R);
std::array<double, 4> hyperspherical_backward(const Hyperspherical& coords);

/// d(alpha, beta, gamma) / d(R0..R3).
Eigen::Matrix<double, 3, 4> hyperspherical_angle_jacobian(const std::array<double, 4>& R);
/// d(R0..R3) / d(alpha, beta, gamma) at fixed r.
Eigen::Matrix<double, 4, 3> hyperspherical_moduli_jacobian(const Hyperspherical& coords);

/// Y = (alpha, beta, gamma, theta0..3, omega_a, omega_b, h) of an interior representation.
TangentVector rep_to_tangent_coords(const ConfigRepd& rep);
RepVector<double> tangent_coords_to_rep(const TangentVector& y);

/// Maps a sphere-tangent increment dX to the 18 tangent coordinates dY.
TangentVector transport_solution(const Eigen::VectorXd& dx, const ConfigRepd& x0, double tangency_tol = 1e-9);
/// Inverse of transport_solution on sphere-tangent increments.
RepVector<double> lift_solution(const TangentVector& dy, const ConfigRepd& x0);

struct TangentSystem {
  Eigen::Matrix<double, kTangentRows, kTangentDim> matrix;
  Eigen::Matrix<double, kTangentRows, 1> rhs;
};

/// The 13x18 system (D g~, D f~) at Y0 = h~(X0), by chain rule through the 19-variable Jacobian.
TangentSystem tangent_system(const ConfigRepd& x0, double h_step = 1e-6, double delta_e = 1.0);
/// Same system, differentiating the composed maps in Y directly.
TangentSystem tangent_system_direct(const ConfigRepd& x0, double h_step = 1e-6, double delta_e = 1.0);

}  // namespace twotls
