#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twotls/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twotls::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "twotls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "twotls_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("argument handling") {
  CHECK(invoke({}).status == kExitUsage);
  CHECK(invoke({"frobnicate"}).status == kExitUsage);
  CHECK(invoke({"sample", "--n", "abc"}).status == kExitUsage);
  const Outcome help = invoke({"--help"});
  CHECK(help.status == kExitOk);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("sample") {
  SUBCASE("small run") {
    const Outcome o = invoke({"sample", "--n", "12", "--seed", "4", "--per-sample"});
    REQUIRE(o.status == kExitOk);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["n_samples"] == 12);
    CHECK(j["n_solvable"] == 12);
    CHECK(j["seed"] == 4);
    CHECK(j["threshold"] == 1e-12);
    CHECK(j["samples"].size() == 12);
  }

  SUBCASE("usage errors") {
    CHECK(invoke({"sample", "--n", "0"}).status == kExitUsage);
    CHECK(invoke({"sample", "--n", "3", "--delta-e", "0"}).status == kExitUsage);
    CHECK(invoke({"sample", "--n", "3", "--h-step", "-1e-6"}).status == kExitUsage);
  }

  SUBCASE("unmet threshold exits 1") {
    const Outcome o = invoke({"sample", "--n", "3", "--threshold", "1e-300"});
    CHECK(o.status == kExitFailed);
    CHECK(nlohmann::json::parse(o.out)["n_solvable"] == 0);
  }

  SUBCASE("byte-identical reruns") {
    const std::vector<std::string> args{"sample", "--n", "25", "--seed", "99", "--per-sample"};
    CHECK(invoke(args).out == invoke(args).out);
    std::vector<std::string> one_worker = args;
    one_worker.insert(one_worker.end(), {"--workers", "1"});
    CHECK(invoke(one_worker).out == invoke(args).out);
  }

  SUBCASE("report to file") {
    const fs::path path = scratch("report.json");
    fs::remove(path);
    const Outcome o = invoke({"sample", "--n", "2", "--out", path.string()});
    CHECK(o.status == kExitOk);
    CHECK(o.out.empty());
    CHECK(nlohmann::json::parse(read_file(path))["n_samples"] == 2);
  }
}

TEST_CASE("config file") {
  const fs::path path = scratch("config.json");
  write_file(path, R"({"n": 7, "seed": 3, "threshold": 1e-13})");

  SUBCASE("file values apply") {
    const auto j = nlohmann::json::parse(invoke({"sample", "--config", path.string()}).out);
    CHECK(j["n_samples"] == 7);
    CHECK(j["seed"] == 3);
    CHECK(j["threshold"] == 1e-13);
  }

  SUBCASE("flags win over the file") {
    const auto j = nlohmann::json::parse(invoke({"sample", "--config", path.string(), "--n", "4"}).out);
    CHECK(j["n_samples"] == 4);
    CHECK(j["seed"] == 3);
  }

  SUBCASE("bad documents") {
    const fs::path unknown = scratch("unknown.json");
    write_file(unknown, R"({"n": 7, "colour": "red"})");
    CHECK(invoke({"sample", "--config", unknown.string()}).status == kExitUsage);
    const fs::path wrong_type = scratch("wrong_type.json");
    write_file(wrong_type, R"({"n": "seven"})");
    CHECK(invoke({"sample", "--config", wrong_type.string()}).status == kExitUsage);
    const fs::path broken = scratch("broken.json");
    write_file(broken, "{\"n\": ");
    CHECK(invoke({"sample", "--config", broken.string()}).status == kExitUsage);
    CHECK(invoke({"sample", "--config", scratch("missing.json").string()}).status == kExitUsage);
  }

  SUBCASE("simulate keys") {
    RunConfig c;
    apply_json(c, nlohmann::json::parse(R"({"delta": 0.64, "alpha": 1, "law": "bare", "lambda_im": 0.0})"));
    CHECK(c.delta == 0.64);
    CHECK(c.alpha == 1.0);
    CHECK(c.law == "bare");
    CHECK(c.lambda_im == 0.0);
    CHECK(c.lambda_re == 0.83);
    CHECK_THROWS_AS(apply_json(c, nlohmann::json::array()), std::invalid_argument);
  }
}

TEST_CASE("simulate") {
  SUBCASE("default trajectory") {
    const Outcome o = invoke({"simulate", "--n-steps", "10"});
    REQUIRE(o.status == kExitOk);
    std::istringstream in(o.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,u_a,u_b,u_total,mean_h,defect");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 11);
  }

  SUBCASE("dephasing offset in the defect column") {
    const Outcome o = invoke({"simulate", "--delta", "0.64", "--n-steps", "50"});
    std::istringstream in(o.out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const double defect = std::stod(line.substr(line.rfind(',') + 1));
      CHECK(std::abs(defect + 0.64) < 1e-10);
    }
  }

  SUBCASE("reproducible bytes") {
    const std::vector<std::string> args{"simulate", "--alpha", "1", "--delta", "0.64", "--law", "rc"};
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    std::vector<std::string> to_a = args, to_b = args;
    to_a.insert(to_a.end(), {"--out", a.string()});
    to_b.insert(to_b.end(), {"--out", b.string()});
    CHECK(invoke(to_a).status == kExitOk);
    CHECK(invoke(to_b).status == kExitOk);
    CHECK(read_file(a) == read_file(b));
    CHECK(read_file(a) == invoke(args).out);
  }

  SUBCASE("undefined points go to standard error") {
    const Outcome o = invoke({"simulate", "--alpha", "-1", "--n-steps", "4"});
    CHECK(o.status == kExitOk);
    CHECK(o.err.find("t=0:") != std::string::npos);
    CHECK(o.out.find("\n0,,,,") != std::string::npos);
  }

  SUBCASE("usage errors") {
    CHECK(invoke({"simulate", "--law", "heat"}).status == kExitUsage);
    CHECK(invoke({"simulate", "--omega-a", "0"}).status == kExitUsage);
    CHECK(invoke({"simulate", "--n-steps", "0"}).status == kExitUsage);
  }
}

TEST_CASE("verify") {
  SUBCASE("passing run") {
    const Outcome o = invoke({"verify", "--cases", "10"});
    CHECK(o.status == kExitOk);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["passed"] == true);
    CHECK(j["suites"].size() == 5);
    for (const auto& s : j["suites"]) CHECK(s["failures"] == 0);
  }

  SUBCASE("suite selection") {
    const auto j = nlohmann::json::parse(invoke({"verify", "--cases", "5", "--suite", "core,iel"}).out);
    REQUIRE(j["suites"].size() == 2);
    CHECK(j["suites"][0]["suite"] == "core");
    CHECK(j["suites"][1]["suite"] == "iel");
  }

  SUBCASE("fault injection is caught") {
    const Outcome o = invoke({"verify", "--cases", "10", "--inject-fault"});
    CHECK(o.status == kExitFailed);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["passed"] == false);
    std::size_t failures = 0;
    for (const auto& s : j["suites"]) failures += s["failures"].get<std::size_t>();
    CHECK(failures > 0);
  }

  SUBCASE("usage errors") {
    CHECK(invoke({"verify", "--suite", ""}).status == kExitUsage);
    CHECK(invoke({"verify", "--suite", "nonsense"}).status == kExitUsage);
    CHECK(invoke({"verify", "--cases", "0"}).status == kExitUsage);
  }

  SUBCASE("reproducible") {
    CHECK(invoke({"verify", "--cases", "5", "--seed", "8"}).out == invoke({"verify", "--cases", "5", "--seed", "8"}).out);
  }
}
