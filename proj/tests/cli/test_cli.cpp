#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli/cli.hpp"
#include "critheat/errors.hpp"

namespace fs = std::filesystem;
using critheat::cli::dispatch;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("critheat_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("window lists") {
  using critheat::cli::parse_windows;
  CHECK(parse_windows("1..3") == std::vector<int>{1, 2, 3});
  CHECK(parse_windows("2") == std::vector<int>{2});
  CHECK(parse_windows("1,3") == std::vector<int>{1, 3});
  CHECK_THROWS_AS(parse_windows("3..1"), critheat::ConfigError);
  CHECK_THROWS_AS(parse_windows("a..b"), critheat::ConfigError);
  CHECK_THROWS_AS(parse_windows("0"), critheat::ConfigError);
}

TEST_CASE("usage errors exit 2") {
  CHECK(dispatch({"critheat"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "nonsense"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "lambda", "--bogus"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "lambda", "--D", "sideways"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "lambda", "--n1", "2"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "tail", "--windows", "3..1"}) == critheat::cli::kExitUsage);
  CHECK(dispatch({"critheat", "--help"}) == critheat::cli::kExitOk);
}

TEST_CASE("module errors exit 1") {
  const auto out = scratch("module_error");
  CHECK(dispatch({"critheat", "--out", out.string(), "tail", "--datum", "oscillating", "--R", "10,20"}) ==
        critheat::cli::kExitModuleError);
}

TEST_CASE("failing verdicts exit 3") {
  const auto out = scratch("verdict_failure");
  CHECK(dispatch({"critheat", "--out", out.string(), "spectrum", "--R", "10,20"}) == critheat::cli::kExitVerdictFailed);
  CHECK(fs::exists(out / "verdicts.jsonl"));
}

TEST_CASE("lambda subcommand writes trajectory and verdicts") {
  const auto out = scratch("lambda");
  REQUIRE(dispatch({"critheat", "--out", out.string(), "lambda", "--n1", "16", "--jmax", "5", "--D", "envelope+"}) == 0);
  CHECK(fs::exists(out / "lambda_trajectory.csv"));
  CHECK(slurp(out / "lambda_trajectory.csv").rfind("tau,loglambda,branch\n", 0) == 0);
  CHECK(slurp(out / "lambda_verdicts.csv").rfind("j,parity,bound,lhs,rhs,pass\n", 0) == 0);
  std::ifstream in(out / "verdicts.jsonl");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"check", "pass", "lhs", "rhs", "tol", "anchor"}) CHECK(j.contains(key));
    CHECK(j["pass"].get<bool>());
    CHECK(!j["anchor"].get<std::string>().empty());
    ++n;
  }
  CHECK(n > 10);
}

TEST_CASE("reruns are byte-identical") {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  for (const auto& out : {a, b})
    REQUIRE(dispatch({"critheat", "--out", out.string(), "lambda", "--D", "random", "--seed", "4"}) == 0);
  CHECK(slurp(a / "lambda_trajectory.csv") == slurp(b / "lambda_trajectory.csv"));
  CHECK(slurp(a / "verdicts.jsonl") == slurp(b / "verdicts.jsonl"));
}

TEST_CASE("tail windows write one report per window") {
  const auto out = scratch("tail");
  REQUIRE(dispatch({"critheat", "--out", out.string(), "tail", "--datum", "oscillating", "--windows", "1..3", "--samples",
                    "4"}) == 0);
  for (int j = 1; j <= 3; ++j) CHECK(fs::exists(out / ("tail_window_" + std::to_string(j) + ".csv")));
  CHECK(fs::exists(out / "tail_windows.csv"));
}

TEST_CASE("config file, flags override it") {
  const auto out = scratch("config");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "run.ini");
    cfg << "[lambda]\nD = envelope-\njmax = 3\n";
  }
  REQUIRE(dispatch({"critheat", "--config", (out / "run.ini").string(), "--out", out.string(), "lambda", "--jmax", "4"}) == 0);
  const std::string v = slurp(out / "lambda_verdicts.csv");
  CHECK(v.find("\n4,") != std::string::npos);
  CHECK(v.find("\n5,") == std::string::npos);
}

TEST_CASE("output directory from the environment") {
  const auto out = scratch("env");
  ::setenv("CRITHEAT_OUT", out.string().c_str(), 1);
  REQUIRE(dispatch({"critheat", "lambda", "--jmax", "3"}) == 0);
  CHECK(fs::exists(out / "lambda_trajectory.csv"));
  CHECK(fs::exists(out / "verdicts.jsonl"));
  CHECK(critheat::cli::resolve_out_dir("x") == fs::path("x"));
  ::unsetenv("CRITHEAT_OUT");
  CHECK(critheat::cli::resolve_out_dir("") == fs::path("out"));
}
