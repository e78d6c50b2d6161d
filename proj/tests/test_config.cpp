#include "apdyn/acceptance.hpp"
#include "apdyn/commands.hpp"
#include "apdyn/config.hpp"
#include "apdyn/errors.hpp"
#include "apdyn/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace apdyn;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("apdyn_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

ExperimentConfig parse(const std::string& text) { return parse_config(json::parse(text)); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal configuration fills in defaults") {
  const auto c = parse(R"({"system": {"lambda": 5}})");
  CHECK(c.lambda == 5.0);
  CHECK(c.N == 32);
  CHECK(c.epsilon == doctest::Approx(1e-2));
  CHECK_NOTHROW(validate_config(c));
  const auto round = parse_config(config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("schema errors are configuration errors") {
  CHECK_THROWS_AS(parse(R"({"system": {"N": 8}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": 5, "mu": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": 5}, "extra": 1})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": "five"}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": 5, "N": 2.5}})"), ConfigError);
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": 5}, "rng_seed": -1})"), ConfigError);
  CHECK_THROWS_AS(validate_config(parse(R"({"system": {"lambda": 4}})")), ConfigError);
  CHECK_THROWS_AS(validate_config(parse(R"({"system": {"lambda": 5, "alpha": 1.5}})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/apdyn.json"), ConfigError);
}

TEST_CASE("tolerance overrides accept numbers only") {
  const auto c = parse(R"({"system": {"lambda": 5}, "validate": {"tolerances": {"c2.min_gap": 0.1}}})");
  CHECK(c.tolerances.at("c2.min_gap") == doctest::Approx(0.1));
  CHECK_THROWS_AS(parse(R"({"system": {"lambda": 5}, "validate": {"tolerances": {"c2.min_gap": "x"}}})"),
                  ConfigError);
}

TEST_CASE("equilibria command writes its report") {
  auto cfg = parse(R"({"system": {"N": 12, "lambda": 5}})");
  const auto dir = scratch("equilibria");
  std::ostringstream log;
  CHECK(cmd_equilibria(cfg, dir.string(), log) == 0);
  const json j = json::parse(slurp(dir / "equilibria.json"));
  CHECK(j["count"]["value"] == 5);
  CHECK(j["version"] == kVersion);
  CHECK(std::filesystem::exists(dir / "equilibria.csv"));
}

TEST_CASE("classification output is deterministic for a fixed seed") {
  auto cfg = parse(R"({"system": {"N": 8, "lambda": 5},
                       "solver": {"window_start": -60, "window_end": 60},
                       "sampling": {"n_samples": 6}})");
  const auto a = scratch("classify_a");
  const auto b = scratch("classify_b");
  std::ostringstream log;
  CHECK(cmd_classify(cfg, a.string(), log) == 0);
  CHECK(cmd_classify(cfg, b.string(), log) == 0);
  CHECK(slurp(a / "classify.json") == slurp(b / "classify.json"));
}

TEST_CASE("excessive forcing is a budget error") {
  auto cfg = parse(R"({"system": {"N": 8, "lambda": 5}, "forcing": {"epsilon": 10}})");
  std::ostringstream log;
  CHECK_THROWS_AS(cmd_ap_solve(cfg, scratch("budget").string(), log), BudgetError);
}

TEST_CASE("validate honours tolerance overrides") {
  std::ostringstream log;
  auto cfg = parse(R"({"system": {"lambda": 5}, "validate": {"criteria": [2]}})");
  CHECK(cmd_validate(cfg, scratch("validate_ok").string(), log) == 0);
  cfg.tolerances["c2.min_gap"] = 10.0;
  CHECK(cmd_validate(cfg, scratch("validate_broken").string(), log) == 1);
  cfg.tolerances["c2.no_such_key"] = 1.0;
  CHECK_THROWS_AS(cmd_validate(cfg, scratch("validate_bad").string(), log), ConfigError);
}
