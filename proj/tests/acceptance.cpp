// Runs every acceptance criterion through the verifier scenarios with default
// settings and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <map>

#include "dtrans/verify/scenarios.hpp"

using namespace dtrans::verify;

namespace {

struct Criterion {
  int number;
  const char* title;
  const char* scenario;
  const char* prefix;  // record-name prefix; empty selects the whole report
};

const Criterion kCriteria[] = {
    {1, "degree pinning on P^1", "metric_invariance", "degree"},
    {2, "classical Poincare-Lelong", "poincare_lelong", ""},
    {3, "generalized Poincare-Lelong for z^2", "generalized_pl", ""},
    {4, "multiplicity dual-route agreement", "multiplicity_localization", ""},
    {5, "weak limits of (lambda s)^* c1(tau*)", "weighted_limits", "sweep"},
    {6, "graph-closure equations", "cstar_closure", ""},
    {7, "limit set of a weighted action", "weighted_limits", "line"},
    {8, "superconnection structure", "superconnection_transgression", "structure"},
    {9, "transgression sweep for A = z", "superconnection_transgression", "sweep"},
    {10, "correspondence algebra", "correspondence_algebra", ""},
    {11, "metric invariance of the degree", "metric_invariance", "perturbation"},
};

}  // namespace

int main() {
  auto cfg = Config::defaults();
  std::map<std::string, Report> cache;
  int failed = 0;
  for (const auto& c : kCriteria) {
    auto it = cache.find(c.scenario);
    if (it == cache.end()) it = cache.emplace(c.scenario, run_scenario(cfg.scenario(c.scenario, "."), {7, 1, false})).first;
    const Report& r = it->second;
    std::string pre = c.prefix;
    std::size_t n = 0, bad = 0;
    double worst = 0;  // largest residual / tolerance among inexact records
    for (const auto& rec : r.records) {
      if (rec.name.compare(0, pre.size(), pre) != 0) continue;
      ++n;
      if (!rec.ok()) {
        ++bad;
        std::printf("    failing record: %s (residual %.3e, tolerance %.3e)\n", rec.name.c_str(), rec.residual,
                    rec.tolerance);
      }
      if (rec.tolerance > 0) worst = std::max(worst, rec.residual / rec.tolerance);
    }
    bool ok = r.error.empty() && n > 0 && bad == 0;
    if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
    std::printf("criterion %2d %s  %-40s %3zu checks, worst residual/tolerance %.2e, %s %.1f s\n", c.number,
                ok ? "PASS" : "FAIL", c.title, n, worst, c.scenario, r.seconds);
    failed += !ok;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
