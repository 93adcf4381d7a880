#include "dtrans/verify/report.hpp"

#include <Eigen/Core>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>

#ifndef DTRANS_BUILD_TYPE
#define DTRANS_BUILD_TYPE "unknown"
#endif

namespace dtrans::verify {

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

// shortest representation that round-trips
std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json environment() {
  json e;
#if defined(__clang__)
  e["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  e["compiler"] = "gcc " __VERSION__;
#else
  e["compiler"] = "unknown";
#endif
  e["cxx_standard"] = __cplusplus;
  e["build_type"] = DTRANS_BUILD_TYPE;
  e["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  return e;
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Paper:
      return "PAPER";
    case Provenance::Trivial:
      return "TRIVIAL";
    case Provenance::Derived:
      return "DERIVED";
  }
  return "DERIVED";
}

json complex_json(std::complex<double> z) { return json::array({number(z.real()), number(z.imag())}); }

bool Report::pass() const {
  if (!error.empty() || records.empty()) return false;
  for (const auto& r : records)
    if (!r.ok()) return false;
  return true;
}

json Report::to_json(bool timestamp) const {
  json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario;
  j["pass"] = pass();
  j["seed"] = seed;
  j["tol_scale"] = tol_scale;
  j["error"] = error.empty() ? json(nullptr) : json(error);
  json recs = json::array();
  for (const auto& r : records) {
    json x;
    x["name"] = r.name;
    x["expected"] = r.expected;
    x["actual"] = r.actual;
    x["residual"] = number(r.residual);
    x["tolerance"] = number(r.tolerance);
    x["provenance"] = to_string(r.provenance);
    x["pass"] = r.ok();
    recs.push_back(std::move(x));
  }
  j["records"] = std::move(recs);
  j["observations"] = observations;
  j["artifacts"] = artifacts;
  j["environment"] = environment();
  if (timestamp) {
    j["timing_seconds"] = seconds;
    j["timestamp"] = utc_now();
  }
  return j;
}

void write_sweep_csv(std::ostream& os, const std::vector<currents::SweepPoint>& sweep) {
  os << "lambda,pairing_re,pairing_im\n";
  for (const auto& p : sweep) os << fmt(p.lambda) << ',' << fmt(p.value.real()) << ',' << fmt(p.value.imag()) << '\n';
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<currents::SweepPoint>& sweep) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write_sweep_csv(out, sweep);
}

void print_table(std::ostream& os, const Report& r) {
  os << r.scenario << ": " << (r.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto& x : r.records)
    os << "  " << (x.ok() ? "ok  " : "FAIL") << "  " << std::left << std::setw(56) << x.name << std::right
       << "  residual " << std::setw(11) << std::setprecision(3) << std::scientific << x.residual << "  tol "
       << std::setw(9) << x.tolerance << std::defaultfloat << "  " << to_string(x.provenance) << '\n';
  if (!r.error.empty()) os << "  error: " << r.error << '\n';
}

}  // namespace dtrans::verify
