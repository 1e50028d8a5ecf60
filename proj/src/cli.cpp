#include "twotls/cli.hpp"

#include "twotls/locality.hpp"
#include "twotls/simulate.hpp"
#include "twotls/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>

namespace twotls::cli {

namespace {

/// Binds one RunConfig member to its JSON key and its flag.
struct Field {
  std::string key;
  std::function<void(RunConfig&, const nlohmann::json&)> from_json;
  std::function<void(RunConfig&, const RunConfig&)> copy;
};

template <typename T>
Field field(const std::string& key, T RunConfig::*member) {
  return {key, [member](RunConfig& c, const nlohmann::json& v) { c.*member = v.get<T>(); },
          [member](RunConfig& dst, const RunConfig& src) { dst.*member = src.*member; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      field("n", &RunConfig::n),
      field("seed", &RunConfig::seed),
      field("h_step", &RunConfig::h_step),
      field("threshold", &RunConfig::threshold),
      field("delta_e", &RunConfig::delta_e),
      field("per_sample", &RunConfig::per_sample),
      field("workers", &RunConfig::workers),
      field("omega_a", &RunConfig::omega_a),
      field("omega_b", &RunConfig::omega_b),
      field("lambda_re", &RunConfig::lambda_re),
      field("lambda_im", &RunConfig::lambda_im),
      field("delta", &RunConfig::delta),
      field("alpha", &RunConfig::alpha),
      field("t_max", &RunConfig::t_max),
      field("n_steps", &RunConfig::n_steps),
      field("law", &RunConfig::law),
      field("suites", &RunConfig::suites),
      field("cases", &RunConfig::cases),
      field("inject_fault", &RunConfig::inject_fault),
      field("out", &RunConfig::out),
  };
  return all;
}

const Field& field_by_key(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw std::invalid_argument("unknown configuration key '" + key + "'");
}

/// Writes to --out when given, else to the provided stream.
int emit(const RunConfig& config, std::ostream& out, std::ostream& err, const std::function<void(std::ostream&)>& write) {
  if (config.out.empty()) {
    write(out);
    return kExitOk;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << config.out << "' for writing\n";
    return kExitUsage;
  }
  write(file);
  return kExitOk;
}

}  // namespace

void apply_json(RunConfig& config, const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("configuration document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      field_by_key(key).from_json(config, value);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("bad value for '" + key + "': " + e.what());
    }
    if (key == "suites") config.suites_given = true;
  }
}

int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.n < 1) {
    err << "error: n must be at least 1\n";
    return kExitUsage;
  }
  if (!(config.h_step > 0.0) || !(config.threshold > 0.0) || config.delta_e == 0.0 || !std::isfinite(config.delta_e)) {
    err << "error: h_step and threshold must be positive, delta_e finite and nonzero\n";
    return kExitUsage;
  }
  ExperimentOptions options;
  options.n = config.n;
  options.seed = config.seed;
  options.h_step = config.h_step;
  options.threshold = config.threshold;
  options.delta_e = config.delta_e;
  options.workers = config.workers;
  const SolvabilityReport report = run_experiment(options);
  for (std::size_t index : report.failed_indices) {
    err << "sample " << index << " failed: " << report.samples[index].error << '\n';
  }
  const int status = emit(config, out, err, [&](std::ostream& os) { os << to_json(report, config.per_sample).dump(2) << '\n'; });
  if (status != kExitOk) return status;
  return report.n_solvable == report.n_samples ? kExitOk : kExitFailed;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto law = parse_law(config.law);
  if (!law) {
    err << "error: unknown law '" << config.law << "' (expected bare or rc)\n";
    return kExitUsage;
  }
  SimulationParams params;
  params.omega_a = config.omega_a;
  params.omega_b = config.omega_b;
  params.lambda = {config.lambda_re, config.lambda_im};
  params.delta = config.delta;
  params.alpha = config.alpha;
  params.t_max = config.t_max;
  params.n_steps = config.n_steps;
  params.law = *law;
  try {
    params.validate();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::vector<TrajectoryPoint> points = simulate_trajectory(params);
  for (const TrajectoryPoint& p : points) {
    if (!p.diagnostic.empty()) err << "t=" << format_number(p.t) << ": " << p.diagnostic << '\n';
  }
  return emit(config, out, err, [&](std::ostream& os) { write_trajectory_csv(os, points); });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.suites_given && (config.suites.empty() ||
                              std::any_of(config.suites.begin(), config.suites.end(), [](const std::string& s) { return s.empty(); }))) {
    err << "error: empty suite selection\n";
    return kExitUsage;
  }
  if (config.cases < 1) {
    err << "error: cases must be at least 1\n";
    return kExitUsage;
  }
  VerifyOptions options;
  options.suites = config.suites;
  options.seed = config.seed;
  options.cases = config.cases;
  options.flip_rho_dot_sign = config.inject_fault;
  std::vector<SuiteResult> results;
  try {
    results = run_verification(options);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const int status = emit(config, out, err, [&](std::ostream& os) { os << to_json(results).dump(2) << '\n'; });
  if (status != kExitOk) return status;
  return all_passed(results) ? kExitOk : kExitFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Internal-energy laws for a universe of two two-level systems"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> given;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat JSON document with default parameters");
    given.emplace_back("out", sub->add_option("--out", flags.out, "Output file (default: standard output)"));
    given.emplace_back("seed", sub->add_option("--seed", flags.seed, "Master seed"));
  };

  CLI::App* sample = app.add_subcommand("sample", "Run the linear-system solvability experiment");
  add_common(sample);
  given.emplace_back("n", sample->add_option("--n", flags.n, "Number of sampled configurations"));
  given.emplace_back("h_step", sample->add_option("--h-step", flags.h_step, "Central-difference step"));
  given.emplace_back("threshold", sample->add_option("--threshold", flags.threshold, "Residual threshold for solvability"));
  given.emplace_back("delta_e", sample->add_option("--delta-e", flags.delta_e, "Right-hand side of the <H> row"));
  given.emplace_back("per_sample", sample->add_flag("--per-sample", flags.per_sample, "Include per-sample residuals"));
  given.emplace_back("workers", sample->add_option("--workers", flags.workers, "Worker threads (0 = hardware)"));

  CLI::App* simulate = app.add_subcommand("simulate", "Write an energy trajectory as CSV");
  add_common(simulate);
  given.emplace_back("omega_a", simulate->add_option("--omega-a", flags.omega_a));
  given.emplace_back("omega_b", simulate->add_option("--omega-b", flags.omega_b));
  given.emplace_back("lambda_re", simulate->add_option("--lambda-re", flags.lambda_re));
  given.emplace_back("lambda_im", simulate->add_option("--lambda-im", flags.lambda_im));
  given.emplace_back("delta", simulate->add_option("--delta", flags.delta));
  given.emplace_back("alpha", simulate->add_option("--alpha", flags.alpha, "|11> weight of the initial state"));
  given.emplace_back("t_max", simulate->add_option("--t-max", flags.t_max));
  given.emplace_back("n_steps", simulate->add_option("--n-steps", flags.n_steps));
  given.emplace_back("law", simulate->add_option("--law", flags.law, "bare or rc"));

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant and oracle suites");
  add_common(verify);
  given.emplace_back("suites", verify->add_option("--suite", flags.suites, "Suites to run (comma separated)")->delimiter(','));
  given.emplace_back("cases", verify->add_option("--cases", flags.cases, "Random instances per suite"));
  given.emplace_back("inject_fault", verify->add_flag("--inject-fault", flags.inject_fault, "Flip the sign of rho_dot (mutation check)"));

  // CLI11 takes argv without the const qualifier.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config file '" + config_path + "'");
      apply_json(config, nlohmann::json::parse(in));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  CLI::App* chosen = app.get_subcommands().front();
  for (const auto& [key, option] : given) {
    if (option->count() == 0) continue;
    field_by_key(key).copy(config, flags);
    if (key == "suites") config.suites_given = true;
  }

  try {
    if (chosen == sample) return cmd_sample(config, out, err);
    if (chosen == simulate) return cmd_simulate(config, out, err);
    return cmd_verify(config, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace twotls::cli
