#include "twotls/verify.hpp"

#include "twotls/dynamics.hpp"
#include "twotls/iel.hpp"
#include "twotls/locality.hpp"
#include "twotls/models.hpp"
#include "twotls/random.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace twotls {

namespace {

constexpr std::size_t kMaxMessages = 5;

class Suite {
 public:
  explicit Suite(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.cases;
    if (ok) return;
    ++result_.failures;
    if (result_.messages.size() < kMaxMessages) result_.messages.push_back(what);
  }

  void check_near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << actual << ", expected " << expected << " (tol " << tol << ")";
    check(std::abs(actual - expected) <= tol, os.str());
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

struct Context {
  const VerifyOptions& options;
  std::mt19937_64 rng;

  Matrix2c<double> rho_dot(const Vector4c<double>& psi, const Matrix4c<double>& h, Subsystem s) const {
    Matrix2c<double> m = rho_dot_local(psi, h, s);
    return options.flip_rho_dot_sign ? Matrix2c<double>(-m) : m;
  }
};

double max_abs(const Matrix2c<double>& m) { return m.cwiseAbs().maxCoeff(); }

SuiteResult core_suite(Context& ctx) {
  Suite suite("core");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < ctx.options.cases; ++i) {
    const Configuration<double> config = random_configuration(ctx.rng);
    const Matrix4c<double>& h = config.hamiltonian.matrix;
    suite.check(h == h.adjoint(), "Hamiltonian is not exactly Hermitian");

    const Matrix4c<double> hint = config.hamiltonian.interaction();
    suite.check(max_abs(partial_trace(hint, Subsystem::A)) == 0.0 && max_abs(partial_trace(hint, Subsystem::B)) == 0.0,
                "interaction has an identity component");

    const ConfigRep<double> rep = config_to_rep(config);
    ConfigRep<double> shifted = rep;
    const double phi = phase(ctx.rng);
    for (double& t : shifted.theta) t = wrap_phase(t + phi);
    suite.check_near(mean_energy(rep_to_config(shifted)), mean_energy(rep_to_config(rep)), 1e-12,
                     "mean energy under joint phase shift");
    suite.check(config_equal(rep_to_config(shifted), config, 1e-12), "phase-shifted representation is a different configuration");

    const ConfigRep<double> back = config_to_rep(rep_to_config(rep));
    suite.check(rep_equivalent(back, rep, 1e-12) && rep_equivalent(config_to_rep(rep_to_config(shifted)), rep, 1e-12),
                "rep round trip");
  }
  return suite.take();
}

SuiteResult dynamics_suite(Context& ctx) {
  Suite suite("dynamics");
  for (std::size_t i = 0; i < ctx.options.cases; ++i) {
    const Configuration<double> config = random_configuration(ctx.rng);
    const Propagator<double> prop(config.hamiltonian);
    const double e0 = mean_energy(config);
    double worst_norm = 0.0, worst_energy = 0.0;
    bool legal = true;
    for (int step = 0; step <= 100; ++step) {
      const UniverseState<double> s = prop.apply(config.state, 0.2 * step);
      worst_norm = std::max(worst_norm, std::abs(s.psi.norm() - 1.0));
      worst_energy = std::max(worst_energy, std::abs(mean_energy(Configuration<double>{s, config.hamiltonian}) - e0));
      for (Subsystem sub : {Subsystem::A, Subsystem::B}) {
        legal = legal && is_density_matrix(partial_trace(s, sub), 1e-12) &&
                is_traceless_hermitian(rho_dot_local(s.psi, config.hamiltonian.matrix, sub), 1e-12);
      }
    }
    suite.check_near(worst_norm, 0.0, 1e-12, "norm drift along trajectory");
    suite.check_near(worst_energy, 0.0, 1e-12, "energy drift along trajectory");
    suite.check(legal, "reduced state or derivative violates its invariants");

    // Finite-difference oracle on the propagated reduced state.
    const double eps = 1e-6;
    const Vector4c<double> plus = prop.apply(config.state.psi, eps);
    const Vector4c<double> minus = prop.apply(config.state.psi, -eps);
    for (Subsystem sub : {Subsystem::A, Subsystem::B}) {
      const Matrix2c<double> fd = (partial_trace(plus, sub) - partial_trace(minus, sub)) / (2.0 * eps);
      const Matrix2c<double> algebraic = ctx.rho_dot(config.state.psi, config.hamiltonian.matrix, sub);
      suite.check_near(max_abs(fd - algebraic), 0.0, 1e-8, "rho_dot vs finite difference (" + to_string(sub) + ")");
    }

    // A <-> B: swap |01> and |10>, the gaps, and transpose the couplings.
    Vector4c<double> swapped = config.state.psi;
    std::swap(swapped(1), swapped(2));
    const HamiltonianSpec<double> hs =
        assemble_hamiltonian(config.hamiltonian.omega_b, config.hamiltonian.omega_a, Couplings<double>(config.hamiltonian.h.transpose()));
    const auto ea = extended_state(config, Subsystem::A).to_vector();
    const auto eb_swapped = extended_state(Configuration<double>{{swapped}, hs}, Subsystem::B).to_vector();
    suite.check_near((ea - eb_swapped).cwiseAbs().maxCoeff(), 0.0, 1e-12, "A<->B symmetry of extended states");
  }
  return suite.take();
}

SuiteResult models_suite(Context& ctx) {
  Suite suite("models");
  const Matrix4c<double> number = number_operator<double>();
  for (std::size_t i = 0; i < ctx.options.cases; ++i) {
    const ControlInstance inst = random_control_instance(ctx.rng);
    const Configuration<double> config = inst.configuration();
    const Matrix4c<double>& h = config.hamiltonian.matrix;

    suite.check((h * number - number * h).cwiseAbs().maxCoeff() == 0.0, "H^num does not commute with N");

    for (Subsystem sub : {Subsystem::A, Subsystem::B}) {
      const Matrix2c<double> analytic = control_rho_dot_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b, sub);
      suite.check_near(max_abs(analytic - ctx.rho_dot(config.state.psi, h, sub)), 0.0, 1e-12,
                       "analytic rho_dot vs general (" + to_string(sub) + ")");
    }
    const RcEnergies<double> rc = rc_energies_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b);
    const EnergyPair<double> general = iel_evaluate(Law::rc, config);
    suite.check_near(rc.u_a, general.u_a, 1e-12, "analytic U^A vs general");
    suite.check_near(rc.u_b, general.u_b, 1e-12, "analytic U^B vs general");
    const double mean_analytic = mean_energy_analytic(inst.state, inst.spec, inst.omega_a, inst.omega_b);
    suite.check_near(mean_analytic, mean_energy(config), 1e-12, "analytic <H> vs general");
    suite.check_near(rc.u_total - mean_analytic, -inst.spec.delta, 1e-12, "closed-form offset");

    const Propagator<double> prop(config.hamiltonian);
    const double n0 = expectation(config.state.psi, number);
    double worst_offset = 0.0, worst_psi3 = 0.0, worst_n = 0.0;
    for (int step = 1; step <= 20; ++step) {
      const Configuration<double> c{prop.apply(config.state, 0.5 * step), config.hamiltonian};
      worst_psi3 = std::max(worst_psi3, std::abs(c.state.psi(3)));
      worst_n = std::max(worst_n, std::abs(expectation(c.state.psi, number) - n0));
      worst_offset = std::max(worst_offset, std::abs(consistency_audit(Law::rc, c).defect + inst.spec.delta));
    }
    suite.check_near(worst_psi3, 0.0, 1e-12, "double-excitation amplitude leaks");
    suite.check_near(worst_n, 0.0, 1e-12, "excitation number drifts");
    suite.check_near(worst_offset, 0.0, 1e-10, "rc defect differs from -Delta");
  }
  return suite.take();
}

SuiteResult iel_suite(Context& ctx) {
  Suite suite("iel");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < ctx.options.cases; ++i) {
    const Configuration<double> config = random_configuration(ctx.rng);
    Configuration<double> rotated = config;
    rotated.state.psi *= std::polar(1.0, phase(ctx.rng));
    for (Law law : {Law::bare, Law::rc}) {
      const EnergyPair<double> a = iel_evaluate(law, config);
      const EnergyPair<double> b = iel_evaluate(law, rotated);
      suite.check(std::abs(a.u_a - b.u_a) <= 1e-12 && std::abs(a.u_b - b.u_b) <= 1e-12,
                  law_name(law) + " law depends on the global phase");
      const ConsistencyAudit<double> audit = consistency_audit(law, config);
      suite.check(audit.defect == audit.u_a + audit.u_b - audit.mean_h, "audit defect identity");
    }
    const double hint = expectation(config.state.psi, config.hamiltonian.interaction());
    suite.check_near(consistency_audit(Law::bare, config).defect, -hint, 1e-12, "bare defect equals -<H^int>");

    Configuration<double> free = config;
    free.hamiltonian = assemble_hamiltonian(config.hamiltonian.omega_a, config.hamiltonian.omega_b, Couplings<double>(Couplings<double>::Zero()));
    for (Subsystem sub : {Subsystem::A, Subsystem::B}) {
      suite.check_near(rc_frequency(extended_state(free, sub), sub), bare_gap(free.hamiltonian, sub), 1e-10,
                       "uncoupled rc frequency (" + to_string(sub) + ")");
      suite.check_near(iel_energy(Law::rc, free, sub), iel_energy(Law::bare, free, sub), 1e-12,
                       "uncoupled rc vs bare (" + to_string(sub) + ")");
    }

    // Configurations sharing both extended states: shift Delta by d and both gaps by 2d.
    ControlInstance inst = random_control_instance(ctx.rng);
    ControlInstance twin = inst;
    const double d = 0.25;
    twin.spec.delta += d;
    twin.omega_a += 2 * d;
    twin.omega_b += 2 * d;
    const Configuration<double> c1 = inst.configuration(), c2 = twin.configuration();
    double ext_gap = 0.0;
    for (Subsystem sub : {Subsystem::A, Subsystem::B}) {
      ext_gap = std::max(ext_gap, (extended_state(c1, sub).to_vector() - extended_state(c2, sub).to_vector()).cwiseAbs().maxCoeff());
    }
    suite.check_near(ext_gap, 0.0, 1e-12, "twin configurations have different extended states");
    suite.check_near(iel_evaluate(Law::rc, c1).total(), iel_evaluate(Law::rc, c2).total(), 1e-12, "rc energies of twins");
    suite.check_near(mean_energy(c2) - mean_energy(c1), d, 1e-12, "<H> gap between twins");
  }
  return suite.take();
}

SuiteResult locality_suite(Context& ctx) {
  Suite suite("locality");
  const std::uint64_t seed = ctx.rng();
  const std::size_t n = std::max<std::size_t>(1, ctx.options.cases / 5);
  for (std::size_t i = 0; i < n; ++i) {
    const ConfigRepd rep = sample_interior_rep(seed, i);
    suite.check(in_interior(rep), "sampled point is not interior");

    const Eigen::MatrixXd grad = numerical_jacobian([](const RepVector<double>& x) { return Eigen::VectorXd::Constant(1, norm2_coords(x)); }, rep, 1e-6);
    double worst = 0.0;
    for (int j = 0; j < kRepSize; ++j) worst = std::max(worst, std::abs(grad(0, j) - (j < 4 ? 2.0 * rep.R[j] : 0.0)));
    suite.check_near(worst, 0.0, 1e-10, "Jacobian of sum R^2");

    const Hyperspherical hc = hyperspherical_forward(rep.R);
    const auto back = hyperspherical_backward(hc);
    double rt = 0.0;
    for (int k = 0; k < 4; ++k) rt = std::max(rt, std::abs(back[k] - rep.R[k]));
    suite.check_near(rt, 0.0, 1e-12, "hyperspherical round trip");

    const LinearSystem sys = build_system(rep);
    const LeastSquaresResult ls = solve_least_squares(sys);
    suite.check(ls.residual_norm < 1e-12, "system not solvable at threshold 1e-12");
    double radial = 0.0;
    for (int k = 0; k < 4; ++k) radial += rep.R[k] * ls.solution(k);
    suite.check_near(radial, 0.0, 1e-9, "solution not tangent to the sphere");
    if (std::abs(radial) <= 1e-9) {
      const TangentVector dy = transport_solution(ls.solution, rep);
      const TangentSystem ts = tangent_system_direct(rep);
      suite.check_near((ts.matrix * dy - ts.rhs).norm(), 0.0, 1e-8, "transported solution vs 18-variable system");
    }
  }
  return suite.take();
}

using SuiteFn = std::function<SuiteResult(Context&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"core", core_suite},   {"dynamics", dynamics_suite}, {"models", models_suite},
      {"iel", iel_suite},     {"locality", locality_suite},
  };
  return suites;
}

}  // namespace

std::vector<std::string> available_suites() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  const std::vector<std::string> known = available_suites();
  for (const std::string& s : options.suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ValidationError("verify: unknown suite '" + s + "'");
  }
  std::vector<SuiteResult> results;
  std::size_t position = 0;
  for (const auto& [name, fn] : registry()) {
    ++position;
    if (!options.suites.empty() && std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end()) {
      continue;
    }
    // Each suite draws from its own stream so selections do not shift each other.
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(position)};
    Context ctx{options, std::mt19937_64(seq)};
    try {
      results.push_back(fn(ctx));
    } catch (const std::exception& e) {
      results.push_back({name, 1, 1, {std::string("suite aborted: ") + e.what()}});
    }
  }
  return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.failures == 0; });
}

nlohmann::json to_json(const std::vector<SuiteResult>& results) {
  nlohmann::json suites = nlohmann::json::array();
  for (const SuiteResult& r : results) {
    suites.push_back({{"suite", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"messages", r.messages}});
  }
  return {{"passed", all_passed(results)}, {"suites", suites}};
}

}  // namespace twotls
