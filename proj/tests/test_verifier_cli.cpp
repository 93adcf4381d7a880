#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "dtrans/verify/scenarios.hpp"

using namespace dtrans::verify;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = DTRANS_SOURCE_DIR;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dtrans_verify_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "verify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("registry") {
  const std::vector<std::string> want{"poincare_lelong", "generalized_pl",  "thom_gysin",
                                      "multiplicity_localization", "weighted_limits", "cstar_closure",
                                      "superconnection_transgression", "correspondence_algebra", "metric_invariance"};
  CHECK(list_scenarios() == want);
  CHECK(list_scenarios() == list_scenarios());
  CHECK(known_scenario("thom_gysin"));
  CHECK(!known_scenario("all"));
  // documentation index lists every scenario
  auto doc = slurp(kSource / "docs" / "conventions.md");
  for (const auto& n : want) CHECK(doc.find("`" + n + "`") != std::string::npos);
}

TEST_CASE("config validation") {
  auto defaults = Config::load(kSource / "configs" / "defaults.yaml");
  CHECK(defaults.tol.log_singular == 1e-3);
  CHECK(defaults.scenarios.size() == list_scenarios().size());

  CHECK_NOTHROW(Config::parse("schema_version: 1\n"));
  CHECK_THROWS_AS(Config::parse("schema_version: 2\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("tolerances: {quadrature: 1.0e-6}\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nextra: 3\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\ntolerances: {quadrature: 0}\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\ntolerances: {quadrature: -1}\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {no_such: {}}\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {thom_gysin: {output: x}}\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {metric_invariance: {input: {epsilon: 1}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {metric_invariance: {numeric: {tolerance: 0}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {metric_invariance: {input: {eps: abc}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {poincare_lelong: {input: {section: 'z +'}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      Config::parse("schema_version: 1\nscenarios: {thom_gysin: {input: {test_forms: [{center: [1, 0]}]}}}\n"),
      ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {weighted_limits: {input: {lambdas: [3, 2, 1, 0]}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {generalized_pl: {input: {zero: [0.5, 0]}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("schema_version: 1\nscenarios: {cstar_closure: {input: {weights: [0, 2, 1]}}}\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse("{{{"), ConfigError);
}

TEST_CASE("report semantics") {
  Report r;
  CHECK(!r.pass());  // no records
  r.records.push_back({"a", 1, 1, 0, 0, Provenance::Trivial});
  CHECK(r.pass());
  r.records.push_back({"b", 0.0, 1e-3, 1e-3, 1e-3, Provenance::Paper});
  CHECK(r.pass());
  r.records.push_back({"c", 0.0, "nan", std::nan(""), 1, Provenance::Derived});
  CHECK(!r.pass());
  r.records.pop_back();
  r.error = "boom";
  CHECK(!r.pass());

  auto j = r.to_json(false);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"schema_version", "scenario", "pass", "seed", "tol_scale", "error", "records",
                                         "observations", "artifacts", "environment"});
  std::vector<std::string> rk;
  for (auto it = j["records"][0].begin(); it != j["records"][0].end(); ++it) rk.push_back(it.key());
  CHECK(rk == std::vector<std::string>{"name", "expected", "actual", "residual", "tolerance", "provenance", "pass"});
  CHECK(j["records"][1]["provenance"] == "PAPER");
  CHECK(r.to_json(true).contains("timestamp"));
}

TEST_CASE("sweep CSV") {
  std::ostringstream empty;
  write_sweep_csv(empty, {});
  CHECK(empty.str() == "lambda,pairing_re,pairing_im\n");
  std::ostringstream flat;
  write_sweep_csv(flat, {{1, 2.5}, {10, 2.5}});
  CHECK(flat.str() == "lambda,pairing_re,pairing_im\n1,2.5,0\n10,2.5,0\n");
}

TEST_CASE("scenario runs in memory") {
  auto cfg = Config::defaults();
  auto r = run_scenario(cfg.scenario("metric_invariance", "unused"), {7, 1, false});
  CHECK(r.pass());
  CHECK(r.records.size() == 6);
  for (const auto& rec : r.records) CHECK(rec.residual < 1e-6);
  auto tight = run_scenario(cfg.scenario("metric_invariance", "unused"), {7, 1e-15, false});
  CHECK(!tight.pass());
  CHECK(tight.records.size() == 6);

  auto c = run_scenario(cfg.scenario("correspondence_algebra", "unused"), {7, 1, false});
  CHECK(c.pass());
  bool counted = false;
  for (const auto& rec : c.records)
    if (rec.name == "star = addition: cases within tolerance") counted = rec.actual == 200;
  CHECK(counted);
}

TEST_CASE("command line: exit codes, files and determinism") {
  auto dir = scratch("cli");
  CHECK(cli({"--list"}) == 0);
  CHECK(cli({}) == 2);
  CHECK(cli({"no_such_scenario", "--out", (dir / "x").string()}) == 2);
  CHECK(cli({"metric_invariance", "--tol-scale", "-1"}) == 2);

  auto a = dir / "a", b = dir / "b";
  CHECK(cli({"metric_invariance", "--out", a.string(), "--seed", "7", "--no-timestamp"}) == 0);
  CHECK(cli({"metric_invariance", "--out", b.string(), "--seed", "7", "--no-timestamp"}) == 0);
  CHECK(slurp(a / "metric_invariance.json") == slurp(b / "metric_invariance.json"));
  CHECK(cli({"correspondence_algebra", "--out", a.string(), "--seed", "7", "--no-timestamp"}) == 0);
  CHECK(cli({"correspondence_algebra", "--out", b.string(), "--seed", "7", "--no-timestamp"}) == 0);
  CHECK(slurp(a / "correspondence_algebra.json") == slurp(b / "correspondence_algebra.json"));
  CHECK(cli({"correspondence_algebra", "--out", b.string(), "--seed", "8", "--no-timestamp"}) == 0);
  CHECK(slurp(a / "correspondence_algebra.json") != slurp(b / "correspondence_algebra.json"));
  CHECK(slurp(a / "metric_invariance.json").find("timestamp") == std::string::npos);
  CHECK(cli({"metric_invariance", "--out", a.string()}) == 0);
  CHECK(slurp(a / "metric_invariance.json").find("timestamp") != std::string::npos);

  // impossible tolerance: controlled failure with the full table written
  CHECK(cli({"metric_invariance", "--out", a.string(), "--tol-scale", "1e-15", "--no-timestamp"}) == 1);
  auto failed = slurp(a / "metric_invariance.json");
  CHECK(failed.find("\"pass\": false") != std::string::npos);
  CHECK(failed.find("perturbation 4") != std::string::npos);

  auto bad = write(dir / "bad.yaml", "schema_version: 1\nscenarios:\n  metric_invariance:\n    input: {eps: 0.3, typo: 1}\n");
  CHECK(cli({"metric_invariance", "--config", bad.string(), "--out", a.string()}) == 2);
  CHECK(cli({"metric_invariance", "--config", (dir / "missing.yaml").string()}) == 2);

  // certification that cannot succeed is a numeric failure
  auto strict = write(dir / "strict.yaml",
                      "schema_version: 1\nscenarios:\n  poincare_lelong:\n    numeric: {certify_rel: 1.0e-300, depth: 4}\n");
  CHECK(cli({"poincare_lelong", "--config", strict.string(), "--out", a.string()}) == 3);
  CHECK(slurp(a / "poincare_lelong.json").find("\"error\": null") == std::string::npos);

  // relative corpus path resolves against the config file
  fs::create_directories(dir / "cfg");
  fs::copy_file(kSource / "data" / "multiplicity_corpus.yaml", dir / "corpus.yaml");
  auto rel = write(dir / "cfg" / "m.yaml",
                   "schema_version: 1\nscenarios:\n  multiplicity_localization:\n    input: {corpus: ../corpus.yaml, "
                   "ab_max: 2}\n");
  CHECK(cli({"multiplicity_localization", "--config", rel.string(), "--out", a.string(), "--no-timestamp"}) == 0);
  fs::remove_all(dir);
}
