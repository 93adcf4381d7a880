#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "dtrans/currents/currents.hpp"

namespace dtrans::verify {

using json = nlohmann::ordered_json;

enum class Provenance { Paper, Trivial, Derived };
std::string to_string(Provenance p);

struct Record {
  std::string name;
  json expected;
  json actual;
  double residual = 0;
  double tolerance = 0;
  Provenance provenance = Provenance::Derived;

  /// NaN residuals fail.
  bool ok() const { return residual <= tolerance; }
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  double tol_scale = 1;
  std::vector<Record> records;
  json observations = json::array();  // informational, never part of pass/fail
  std::vector<std::string> artifacts;
  std::string error;                  // internal numeric failure
  double seconds = 0;

  bool pass() const;
  /// Canonical field order; timing and timestamp only when `timestamp` is set.
  json to_json(bool timestamp) const;
};

json complex_json(std::complex<double> z);

/// Columns lambda, pairing_re, pairing_im; an empty sweep gives the header only.
void write_sweep_csv(std::ostream& os, const std::vector<currents::SweepPoint>& sweep);
void write_sweep_csv(const std::filesystem::path& file, const std::vector<currents::SweepPoint>& sweep);

/// Human-readable residual table.
void print_table(std::ostream& os, const Report& r);

}  // namespace dtrans::verify
