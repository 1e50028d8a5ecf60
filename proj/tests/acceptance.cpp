// Acceptance run: one PASS/FAIL line per criterion, with the measured worst case.

#include "twotls/dynamics.hpp"
#include "twotls/iel.hpp"
#include "twotls/locality.hpp"
#include "twotls/models.hpp"
#include "twotls/random.hpp"
#include "twotls/simulate.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <string>

using namespace twotls;

namespace {

int g_failed = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("%s  %-24s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

void solvability() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentOptions options;
  options.n = 5000;
  options.seed = 20240611;
  options.h_step = 1e-6;
  options.threshold = 1e-12;
  const SolvabilityReport tight = run_experiment(options);
  options.threshold = 1e-13;
  const SolvabilityReport tighter = run_experiment(options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = tight.n_solvable == 5000 && tighter.n_solvable == 5000;
  report(ok, "solvability",
         fmt("n=5000 seed=%llu: %zu solvable at 1e-12, %zu at 1e-13; max residual %.2e, median %.2e (%.1f s)",
             static_cast<unsigned long long>(options.seed), tight.n_solvable, tighter.n_solvable, tight.max_residual,
             tight.median_residual, seconds));
}

void offset_law() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ControlInstance inst = random_control_instance(rng);
    const HamiltonianSpecd h = inst.hamiltonian();
    const Propagator<double> u(h);
    const UniverseStated start{inst.state.embed()};
    for (int k = 0; k < 200; ++k) {
      const Configurationd now{u.apply(start, 0.1 * k), h};
      const double total = iel_evaluate(Law::rc, now).total();
      worst = std::max(worst, std::abs(total - mean_energy(now) + inst.spec.delta));
    }
  }
  report(worst < 1e-10, "offset law", fmt("100 instances x 200 times: max |U_rc - <H> + Delta| = %.2e (tol 1e-10)", worst));
}

void trajectories() {
  SimulationParams p;  // omega_a 1, omega_b 0.85, Lambda 0.83 + 0.41i, t in [0, 20]
  double worst_a = 0.0, worst_b = 0.0;
  for (const auto& pt : simulate_trajectory(p)) worst_a = std::max(worst_a, std::abs(*pt.defect()));
  p.delta = 0.64;
  for (const auto& pt : simulate_trajectory(p)) worst_b = std::max(worst_b, std::abs(*pt.defect() + 0.64));

  p.alpha = 1.0;
  double min_range = 1e300, max_drift = 0.0;
  for (double delta : {0.0, 0.64}) {
    p.delta = delta;
    const auto points = simulate_trajectory(p);
    double lo = 1e300, hi = -1e300, h_lo = 1e300, h_hi = -1e300;
    for (const auto& pt : points) {
      lo = std::min(lo, *pt.u_total());
      hi = std::max(hi, *pt.u_total());
      h_lo = std::min(h_lo, pt.mean_h);
      h_hi = std::max(h_hi, pt.mean_h);
    }
    min_range = std::min(min_range, hi - lo);
    max_drift = std::max(max_drift, h_hi - h_lo);
  }
  const bool ok = worst_a < 1e-10 && worst_b < 1e-10 && min_range > 1e-3 && max_drift < 1e-12;
  report(ok, "trajectories",
         fmt("exchange max|defect| %.2e; Delta=0.64 max|defect+0.64| %.2e; alpha=1 min u_total range %.3f, max <H> drift %.2e", worst_a, worst_b,
             min_range, max_drift));
}

void uncoupled_recovery() {
  std::mt19937_64 rng(202);
  double worst_freq = 0.0, worst_energy = 0.0;
  int used = 0;
  while (used < 100) {
    const Configurationd config{random_state(rng), random_hamiltonian(rng, false)};
    const auto ext_a = extended_state(config, Subsystem::A), ext_b = extended_state(config, Subsystem::B);
    if (std::abs(ext_a.coherence()) < 1e-6 || std::abs(ext_b.coherence()) < 1e-6) continue;
    ++used;
    worst_freq = std::max({worst_freq, std::abs(rc_frequency(ext_a, Subsystem::A) - config.hamiltonian.omega_a),
                           std::abs(rc_frequency(ext_b, Subsystem::B) - config.hamiltonian.omega_b)});
    const auto rc = iel_evaluate(Law::rc, config), bare = iel_evaluate(Law::bare, config);
    worst_energy = std::max({worst_energy, std::abs(rc.u_a - bare.u_a), std::abs(rc.u_b - bare.u_b)});
  }
  report(worst_freq < 1e-10 && worst_energy < 1e-12, "uncoupled recovery",
         fmt("100 configs: max |w_rc - w| = %.2e (tol 1e-10), max |U_rc - U_bare| = %.2e (tol 1e-12)", worst_freq, worst_energy));
}

void oracle_equivalence() {
  std::mt19937_64 rng(303);
  double worst_rate = 0.0, worst_rc = 0.0, worst_h = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ControlInstance inst = random_control_instance(rng);
    const Configurationd config = inst.configuration();
    for (Subsystem s : {Subsystem::A, Subsystem::B}) {
      worst_rate = std::max(worst_rate, max_abs(control_rho_dot_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b, s) -
                                                rho_dot_local(config, s)));
    }
    const auto analytic = rc_energies_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b);
    const auto general = iel_evaluate(Law::rc, config);
    worst_rc = std::max({worst_rc, std::abs(analytic.u_a - general.u_a), std::abs(analytic.u_b - general.u_b),
                         std::abs(analytic.u_total - general.total())});
    worst_h = std::max(worst_h, std::abs(mean_energy_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b) - mean_energy(config)));
  }
  const bool ok = worst_rate < 1e-12 && worst_rc < 1e-12 && worst_h < 1e-12;
  report(ok, "oracle equivalence",
         fmt("1000 instances: rho_dot %.2e, rc energies %.2e, <H> %.2e (tol 1e-12)", worst_rate, worst_rc, worst_h));
}

void numerical_hygiene() {
  double worst_grad = 0.0;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    const RepVector<double> x = sample_interior_rep(404, i).to_vector();
    const Eigen::MatrixXd j =
        numerical_jacobian([](const RepVector<double>& v) { return Eigen::VectorXd::Constant(1, norm2_coords(v)); }, x, 1e-6);
    RepVector<double> exact = RepVector<double>::Zero();
    exact.head<4>() = 2.0 * x.head<4>();
    worst_grad = std::max(worst_grad, (j.row(0).transpose() - exact).cwiseAbs().maxCoeff());
  }

  std::mt19937_64 rng(405);
  double worst_rate = 0.0;
  const double eps = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Configurationd config = random_configuration(rng);
    const Propagator<double> u(config.hamiltonian);
    for (Subsystem s : {Subsystem::A, Subsystem::B}) {
      const Matrix2c<double> fd =
          (partial_trace(u.apply(config.state, eps), s) - partial_trace(u.apply(config.state, -eps), s)) / (2.0 * eps);
      worst_rate = std::max(worst_rate, max_abs(fd - rho_dot_local(config, s)));
    }
  }

  double worst_trip = 0.0;
  std::uniform_real_distribution<double> half(0.01, std::numbers::pi / 2 - 0.01), full(0.01, 2 * std::numbers::pi - 0.01);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto R = sample_interior_rep(406, i).R;
    const auto back = hyperspherical_backward(hyperspherical_forward(R));
    for (int k = 0; k < 4; ++k) worst_trip = std::max(worst_trip, std::abs(back[k] - R[k]));
    const Hyperspherical c{1.0, half(rng), half(rng), full(rng)};
    const Hyperspherical again = hyperspherical_forward(hyperspherical_backward(c));
    worst_trip = std::max({worst_trip, std::abs(again.r - 1.0), std::abs(again.alpha - c.alpha), std::abs(again.beta - c.beta),
                           std::abs(again.gamma - c.gamma)});
  }

  double worst_transport = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const ConfigRepd x0 = sample_interior_rep(407, i);
    const auto sol = solve_least_squares(build_system(x0));
    const TangentVector dy = transport_solution(sol.solution, x0);
    const TangentSystem sys = tangent_system_direct(x0);
    worst_transport = std::max(worst_transport, (sys.matrix * dy - sys.rhs).norm());
  }

  const bool ok = worst_grad < 1e-10 && worst_rate < 1e-8 && worst_trip < 1e-12 && worst_transport < 1e-8;
  report(ok, "numerical hygiene",
         fmt("grad sum R^2 %.2e (1e-10); fd rho_dot %.2e (1e-8); round trips %.2e (1e-12); tangent system %.2e (1e-8)", worst_grad,
             worst_rate, worst_trip, worst_transport));
}

void conservation() {
  std::mt19937_64 rng(505);
  double worst_norm = 0.0, worst_h = 0.0, worst_n = 0.0, worst_psi3 = 0.0;
  const Matrix4c<double> number = number_operator();
  auto scan = [&](const UniverseStated& start, const HamiltonianSpecd& h, bool number_conserving) {
    const Propagator<double> u(h);
    const double h0 = expectation(start.psi, h.matrix);
    const double n0 = expectation(start.psi, number);
    const bool sector = std::abs(start.psi(3)) == 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const Vector4c<double> psi = u.apply(start.psi, 0.05 * k);
      worst_norm = std::max(worst_norm, std::abs(psi.norm() - 1.0));
      worst_h = std::max(worst_h, std::abs(expectation(psi, h.matrix) - h0));
      if (number_conserving) worst_n = std::max(worst_n, std::abs(expectation(psi, number) - n0));
      if (number_conserving && sector) worst_psi3 = std::max(worst_psi3, std::abs(psi(3)));
    }
  };
  for (int i = 0; i < 50; ++i) {
    const Configurationd config = random_configuration(rng);
    scan(config.state, config.hamiltonian, false);
    const ControlInstance inst = random_control_instance(rng);
    scan(UniverseStated{inst.state.embed()}, inst.hamiltonian(), true);
    scan(random_state(rng), inst.hamiltonian(), true);
  }
  const bool ok = worst_norm < 1e-12 && worst_h < 1e-12 && worst_n < 1e-12 && worst_psi3 < 1e-12;
  report(ok, "conservation",
         fmt("150 trajectories x 1001 times: norm %.2e, <H> %.2e, <N> %.2e, |psi_3| %.2e (tol 1e-12)", worst_norm, worst_h, worst_n,
             worst_psi3));
}

}  // namespace

int main() {
  solvability();
  offset_law();
  trajectories();
  uncoupled_recovery();
  oracle_equivalence();
  numerical_hygiene();
  conservation();
  std::printf("%d of 7 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
