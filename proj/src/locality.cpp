#include "twotls/locality.hpp"

#include "twotls/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace twotls {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform draw strictly inside (lo, hi). The bit-level mapping keeps streams
/// identical across standard libraries.
double open_uniform(std::mt19937_64& rng, double lo, double hi) {
  for (;;) {
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double v = lo + (hi - lo) * u;
    if (v > lo && v < hi) return v;
  }
}

Matrix4c<double> hamiltonian_from_coords(const RepVector<double>& x) {
  return hamiltonian_matrix(x(kIndexOmegaA), x(kIndexOmegaB), couplings_from_coords(x));
}

}  // namespace

Eigen::Matrix<double, 6, 1> extended_state_coords(const RepVector<double>& x, Subsystem s) {
  return extended_state(amplitudes_from_coords(x), hamiltonian_from_coords(x), s).to_vector();
}

double norm2_coords(const RepVector<double>& x) {
  long double sum = 0.0L;
  for (int k = 0; k < 4; ++k) sum += static_cast<long double>(x(k)) * x(k);
  return static_cast<double>(sum);
}

double mean_energy_coords(const RepVector<double>& x) {
  return expectation(amplitudes_from_coords(x), hamiltonian_from_coords(x));
}

SystemVector system_observables(const RepVector<double>& x) {
  const Vector4c<double> psi = amplitudes_from_coords(x);
  const Matrix4c<double> h = hamiltonian_from_coords(x);
  SystemVector out;
  out.segment<6>(0) = extended_state(psi, h, Subsystem::A).to_vector();
  out.segment<6>(6) = extended_state(psi, h, Subsystem::B).to_vector();
  out(12) = norm2_coords(x);
  out(13) = expectation(psi, h);
  return out;
}

bool in_interior(const ConfigRepd& rep, double tol) {
  double norm2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (!(rep.R[k] > 0.0)) return false;
    if (!(rep.theta[k] > 0.0 && rep.theta[k] < kTwoPi)) return false;
    norm2 += rep.R[k] * rep.R[k];
  }
  return std::abs(norm2 - 1.0) <= tol && rep.omega_a > 0.0 && rep.omega_b > 0.0 && rep.h.allFinite();
}

LinearSystem build_system(const ConfigRepd& x0, double h_step, double delta_e) {
  if (delta_e == 0.0 || !std::isfinite(delta_e)) throw ValidationError("build_system: delta_e must be finite and nonzero");
  if (!in_interior(x0, 1e-9)) throw ValidationError("build_system: X0 is not an interior representation");
  LinearSystem sys;
  sys.matrix = numerical_jacobian([](const RepVector<double>& x) { return system_observables(x); }, x0, h_step);
  sys.rhs(kSystemRows - 1) = delta_e;
  return sys;
}

LeastSquaresResult solve_least_squares(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  if (m.rows() != b.size()) throw ValidationError("solve_least_squares: dimension mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(singular_value_cutoff(m.rows(), m.cols()));
  LeastSquaresResult out;
  out.solution = svd.solve(b);
  out.residual_norm = (m * out.solution - b).norm();
  return out;
}

LeastSquaresResult solve_least_squares(const LinearSystem& sys) {
  return solve_least_squares(Eigen::MatrixXd(sys.matrix), Eigen::VectorXd(sys.rhs));
}

ConfigRepd sample_interior_rep(std::mt19937_64& rng) {
  ConfigRepd rep;
  double norm = 0.0;
  do {
    for (double& r : rep.R) r = open_uniform(rng, 0.0, 1.0);
    norm = std::sqrt(rep.R[0] * rep.R[0] + rep.R[1] * rep.R[1] + rep.R[2] * rep.R[2] + rep.R[3] * rep.R[3]);
  } while (norm < 1e-3);
  for (double& r : rep.R) r /= norm;
  for (double& t : rep.theta) t = open_uniform(rng, 0.0, kTwoPi);
  rep.omega_a = open_uniform(rng, 0.0, 1.0);
  rep.omega_b = open_uniform(rng, 0.0, 1.0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) rep.h(j, k) = open_uniform(rng, -1.0, 1.0);
  return rep;
}

ConfigRepd sample_interior_rep(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  return sample_interior_rep(rng);
}

SampleResult evaluate_sample(std::size_t index, const ExperimentOptions& options) {
  SampleResult result;
  result.index = index;
  result.rep = sample_interior_rep(options.seed, index);
  try {
    const LinearSystem sys = build_system(result.rep, options.h_step, options.delta_e);
    const LeastSquaresResult ls = solve_least_squares(sys);
    if (!ls.solution.allFinite() || !std::isfinite(ls.residual_norm)) {
      throw NonFiniteError(-1, "least-squares solution is not finite");
    }
    result.residual_norm = ls.residual_norm;
    result.solution_norm = ls.solution.norm();
    double radial = 0.0;
    for (int k = 0; k < 4; ++k) radial += result.rep.R[k] * ls.solution(k);
    result.radial_component = radial;
    result.solvable = ls.residual_norm < options.threshold;
  } catch (const std::exception& e) {
    result.failed = true;
    result.solvable = false;
    result.error = e.what();
  }
  return result;
}

SolvabilityReport run_experiment(const ExperimentOptions& options) {
  if (options.n < 1) throw ValidationError("run_experiment: n must be at least 1");
  if (!(options.h_step > 0.0)) throw ValidationError("run_experiment: h_step must be positive");
  if (!(options.threshold > 0.0)) throw ValidationError("run_experiment: threshold must be positive");

  SolvabilityReport report;
  report.n_samples = options.n;
  report.h_step = options.h_step;
  report.threshold = options.threshold;
  report.delta_e = options.delta_e;
  report.seed = options.seed;
  report.samples.resize(options.n);

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, options.n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < options.n; i = next++) report.samples[i] = evaluate_sample(i, options);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<double> residuals;
  residuals.reserve(options.n);
  for (const SampleResult& s : report.samples) {
    if (s.failed) {
      report.failed_indices.push_back(s.index);
      continue;
    }
    residuals.push_back(s.residual_norm);
    if (s.solvable) ++report.n_solvable;
  }
  report.n_failed = report.failed_indices.size();
  if (!residuals.empty()) {
    std::sort(residuals.begin(), residuals.end());
    report.max_residual = residuals.back();
    const std::size_t m = residuals.size();
    report.median_residual = m % 2 ? residuals[m / 2] : 0.5 * (residuals[m / 2 - 1] + residuals[m / 2]);
  }
  return report;
}

nlohmann::json to_json(const SolvabilityReport& report, bool include_samples) {
  nlohmann::json j;
  j["n_samples"] = report.n_samples;
  j["h_step"] = report.h_step;
  j["threshold"] = report.threshold;
  j["delta_e"] = report.delta_e;
  j["seed"] = report.seed;
  j["sampler"] = report.sampler;
  j["n_solvable"] = report.n_solvable;
  j["n_failed"] = report.n_failed;
  j["max_residual"] = report.max_residual;
  j["median_residual"] = report.median_residual;
  j["failed_indices"] = report.failed_indices;
  if (include_samples) {
    nlohmann::json samples = nlohmann::json::array();
    for (const SampleResult& s : report.samples) {
      if (s.failed) {
        samples.push_back({{"index", s.index}, {"residual_norm", nullptr}, {"error", s.error}});
      } else {
        samples.push_back({{"index", s.index}, {"residual_norm", s.residual_norm}});
      }
    }
    j["samples"] = std::move(samples);
  }
  return j;
}

// ---------------------------------------------------------------------------

Hyperspherical hyperspherical_forward(const std::array<double, 4>& R) {
  const auto [r0, r1, r2, r3] = R;
  const double rho_b = std::hypot(r3, r0);
  const double rho_a = std::hypot(r2, rho_b);
  if (rho_b == 0.0 || rho_a == 0.0 || !std::isfinite(rho_a + r1)) {
    throw std::domain_error("hyperspherical_forward: point on a coordinate singularity");
  }
  Hyperspherical c;
  c.r = std::hypot(r1, rho_a);
  c.alpha = std::atan2(rho_a, r1);
  c.beta = std::atan2(rho_b, r2);
  c.gamma = std::atan2(r0, r3);
  if (c.gamma < 0.0) c.gamma += kTwoPi;
  return c;
}

std::array<double, 4> hyperspherical_backward(const Hyperspherical& c) {
  const double sa = std::sin(c.alpha), sb = std::sin(c.beta);
  return {c.r * sa * sb * std::sin(c.gamma), c.r * std::cos(c.alpha), c.r * sa * std::cos(c.beta),
          c.r * sa * sb * std::cos(c.gamma)};
}

Eigen::Matrix<double, 3, 4> hyperspherical_angle_jacobian(const std::array<double, 4>& R) {
  const auto [r0, r1, r2, r3] = R;
  const double rho_b2 = r3 * r3 + r0 * r0;
  const double rho_b = std::sqrt(rho_b2);
  const double rho_a2 = r2 * r2 + rho_b2;
  const double rho_a = std::sqrt(rho_a2);
  if (rho_b == 0.0) throw std::domain_error("hyperspherical_angle_jacobian: coordinate singularity");
  const double r2tot = r1 * r1 + rho_a2;

  Eigen::Matrix<double, 3, 4> d = Eigen::Matrix<double, 3, 4>::Zero();
  // alpha = atan2(rho_a, R1), rho_a = |(R2, R3, R0)|
  d(0, 1) = -rho_a / r2tot;
  d(0, 2) = r1 * r2 / (rho_a * r2tot);
  d(0, 3) = r1 * r3 / (rho_a * r2tot);
  d(0, 0) = r1 * r0 / (rho_a * r2tot);
  // beta = atan2(rho_b, R2), rho_b = |(R3, R0)|
  d(1, 2) = -rho_b / rho_a2;
  d(1, 3) = r2 * r3 / (rho_b * rho_a2);
  d(1, 0) = r2 * r0 / (rho_b * rho_a2);
  // gamma = atan2(R0, R3)
  d(2, 0) = r3 / rho_b2;
  d(2, 3) = -r0 / rho_b2;
  return d;
}

Eigen::Matrix<double, 4, 3> hyperspherical_moduli_jacobian(const Hyperspherical& c) {
  const double sa = std::sin(c.alpha), ca = std::cos(c.alpha);
  const double sb = std::sin(c.beta), cb = std::cos(c.beta);
  const double sg = std::sin(c.gamma), cg = std::cos(c.gamma);
  Eigen::Matrix<double, 4, 3> d;
  // rows R0, R1, R2, R3; columns alpha, beta, gamma
  d << c.r * ca * sb * sg, c.r * sa * cb * sg, c.r * sa * sb * cg,
       -c.r * sa,          0.0,                0.0,
       c.r * ca * cb,      -c.r * sa * sb,     0.0,
       c.r * ca * sb * cg, c.r * sa * cb * cg, -c.r * sa * sb * sg;
  return d;
}

TangentVector rep_to_tangent_coords(const ConfigRepd& rep) {
  const Hyperspherical c = hyperspherical_forward(rep.R);
  const RepVector<double> x = rep.to_vector();
  TangentVector y;
  y << c.alpha, c.beta, c.gamma, x.tail<15>();
  return y;
}

RepVector<double> tangent_coords_to_rep(const TangentVector& y) {
  const auto R = hyperspherical_backward({1.0, y(0), y(1), y(2)});
  RepVector<double> x;
  x << R[0], R[1], R[2], R[3], y.tail<15>();
  return x;
}

TangentVector transport_solution(const Eigen::VectorXd& dx, const ConfigRepd& x0, double tangency_tol) {
  if (dx.size() != kRepSize) throw ValidationError("transport_solution: increment must have 19 entries");
  double radial = 0.0;
  for (int k = 0; k < 4; ++k) radial += x0.R[k] * dx(k);
  if (std::abs(radial) > tangency_tol) {
    throw ValidationError("transport_solution: increment is not tangent to the unit sphere");
  }
  TangentVector dy;
  dy.head<3>() = hyperspherical_angle_jacobian(x0.R) * dx.head<4>();
  dy.tail<15>() = dx.tail<15>();
  return dy;
}

RepVector<double> lift_solution(const TangentVector& dy, const ConfigRepd& x0) {
  const Hyperspherical c = hyperspherical_forward(x0.R);
  RepVector<double> dx;
  dx.head<4>() = hyperspherical_moduli_jacobian(c) * dy.head<3>();
  dx.tail<15>() = dy.tail<15>();
  return dx;
}

namespace {

Eigen::Matrix<double, kTangentRows, 1> tangent_rhs(double delta_e) {
  Eigen::Matrix<double, kTangentRows, 1> rhs = Eigen::Matrix<double, kTangentRows, 1>::Zero();
  rhs(kTangentRows - 1) = delta_e;
  return rhs;
}

}  // namespace

TangentSystem tangent_system(const ConfigRepd& x0, double h_step, double delta_e) {
  const LinearSystem full = build_system(x0, h_step, delta_e);
  const Hyperspherical c = hyperspherical_forward(x0.R);
  // d X / d Y, 19x18
  Eigen::Matrix<double, kRepSize, kTangentDim> lift = Eigen::Matrix<double, kRepSize, kTangentDim>::Zero();
  lift.block<4, 3>(0, 0) = hyperspherical_moduli_jacobian(c);
  lift.block<15, 15>(4, 3).setIdentity();

  Eigen::Matrix<double, kTangentRows, kRepSize> rows;
  rows.topRows<12>() = full.matrix.topRows<12>();
  rows.row(12) = full.matrix.row(kSystemRows - 1);
  return {rows * lift, tangent_rhs(delta_e)};
}

TangentSystem tangent_system_direct(const ConfigRepd& x0, double h_step, double delta_e) {
  if (delta_e == 0.0) throw ValidationError("tangent_system_direct: delta_e must be nonzero");
  auto observables = [](const TangentVector& y) {
    const SystemVector full = system_observables(tangent_coords_to_rep(y));
    Eigen::Matrix<double, kTangentRows, 1> out;
    out << full.head<12>(), full(kSystemRows - 1);
    return Eigen::VectorXd(out);
  };
  TangentSystem sys;
  sys.matrix = numerical_jacobian(observables, rep_to_tangent_coords(x0), h_step);
  sys.rhs = tangent_rhs(delta_e);
  return sys;
}

}  // namespace twotls
