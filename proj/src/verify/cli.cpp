#include <CLI11.hpp>
#include <iostream>

#include "dtrans/verify/scenarios.hpp"

namespace dtrans::verify {

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Run named verification scenarios and write JSON reports plus CSV sweeps."};
  app.name("verify");
  std::string target, config, out = "verify_out";
  std::uint64_t seed = 7;
  double tol_scale = 1;
  bool no_timestamp = false, list = false;
  app.add_option("scenario", target, "scenario name or 'all'");
  app.add_option("--config", config, "YAML config (built-in defaults when omitted)");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--tol-scale", tol_scale, "multiplies every tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", no_timestamp, "omit timing and timestamp for byte-identical reports");
  app.add_flag("--list", list, "print scenario names and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (list) {
    for (const auto& n : list_scenarios()) std::cout << n << '\n';
    return 0;
  }
  if (target.empty()) {
    std::cerr << "verify: missing scenario (one of --list, or 'all')\n";
    return 2;
  }

  Config cfg;
  std::vector<std::string> names;
  try {
    cfg = config.empty() ? Config::defaults() : Config::load(config);
    names = target == "all" ? list_scenarios() : std::vector<std::string>{target};
    for (const auto& n : names) validate(cfg.scenario(n, out));
  } catch (const ConfigError& e) {
    std::cerr << "verify: config error: " << e.what() << '\n';
    return 2;
  }

  RunOptions opt{seed, tol_scale, true};
  bool failed = false, errored = false;
  for (const auto& n : names) {
    Report r;
    try {
      r = run_scenario(cfg.scenario(n, out), opt, !no_timestamp);
    } catch (const ConfigError& e) {
      std::cerr << "verify: config error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "verify: " << n << ": " << e.what() << '\n';
      errored = true;
      continue;
    }
    print_table(std::cout, r);
    errored |= !r.error.empty();
    failed |= !r.pass();
  }
  if (errored) return 3;
  return failed ? 1 : 0;
}

}  // namespace dtrans::verify
