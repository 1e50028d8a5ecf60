// cli.hpp: `sample`, `simulate` and `verify` front end.

#pragma once

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace twotls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Every parameter of every subcommand, settable from a flat JSON document
/// (keys as below) and from flags; flags win.
struct RunConfig {
  // sample
  std::size_t n = 5000;
  std::uint64_t seed = 0;
  double h_step = 1e-6;
  double threshold = 1e-12;
  double delta_e = 1.0;
  bool per_sample = false;
  unsigned workers = 0;
  // simulate; energies in units of omega_a, times in 1/omega_a
  double omega_a = 1.0;
  double omega_b = 0.85;
  double lambda_re = 0.83;
  double lambda_im = 0.41;
  double delta = 0.0;
  double alpha = 0.0;
  double t_max = 20.0;
  std::size_t n_steps = 1000;
  std::string law = "rc";
  // verify
  std::vector<std::string> suites;
  bool suites_given = false;
  std::size_t cases = 100;
  bool inject_fault = false;
  // all
  std::string out;
};

/// Overlays the keys of a flat JSON object; throws std::invalid_argument on unknown keys or bad types.
void apply_json(RunConfig& config, const nlohmann::json& doc);

int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Output goes to `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twotls::cli
