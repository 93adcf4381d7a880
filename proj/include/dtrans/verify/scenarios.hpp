#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dtrans/verify/config.hpp"
#include "dtrans/verify/report.hpp"

namespace dtrans::verify {

struct RunOptions {
  std::uint64_t seed = 7;
  double tol_scale = 1;
  bool write_files = true;
};

/// Registry order, stable across runs.
const std::vector<std::string>& list_scenarios();
bool known_scenario(const std::string& name);

/// Parses the scenario's input and numeric blocks; throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Validates, runs every check, and writes <out>/<name>.json plus CSV sweeps
/// when opt.write_files is set. Module exceptions end up in Report::error.
Report run_scenario(const ScenarioConfig& cfg, const RunOptions& opt, bool timestamp = false);

/// `verify <scenario|all> --config --out --seed [--tol-scale] [--no-timestamp] [--list]`.
/// Exit codes: 0 pass, 1 residual failure, 2 config error, 3 numeric failure.
int run_cli(int argc, const char* const* argv);

}  // namespace dtrans::verify
