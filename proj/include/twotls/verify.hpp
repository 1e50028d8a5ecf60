// verify.hpp: invariant and oracle-equivalence suites runnable from the CLI.

#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace twotls {

struct VerifyOptions {
  std::vector<std::string> suites;  // empty selects every suite
  std::uint64_t seed = 20240611;
  std::size_t cases = 100;
  /// Mutation hook: negates the general-machinery rho_dot inside the suites.
  bool flip_rho_dot_sign = false;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failure descriptions
};

std::vector<std::string> available_suites();

/// Throws ValidationError on an unknown suite name.
std::vector<SuiteResult> run_verification(const VerifyOptions& options);

bool all_passed(const std::vector<SuiteResult>& results);

nlohmann::json to_json(const std::vector<SuiteResult>& results);

}  // namespace twotls
