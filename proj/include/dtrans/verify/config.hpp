#pragma once

#include <yaml-cpp/yaml.h>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtrans::verify {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double quadrature = 1e-6;
  double log_singular = 1e-3;
  double extrapolation = 1e-2;
};

/// Typed view of one YAML mapping. Every read marks the key as known;
/// finish() rejects the rest.
class Block {
 public:
  Block(YAML::Node node, std::string path);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;

  double real(const std::string& key, double def);
  double positive(const std::string& key, double def);
  long integer(const std::string& key, long def, long min = 0);
  std::string text(const std::string& key, const std::string& def);
  std::complex<double> complex(const std::string& key, std::complex<double> def);
  std::vector<double> reals(const std::string& key, const std::vector<double>& def);
  std::vector<std::string> texts(const std::string& key, const std::vector<std::string>& def);
  std::vector<long> integers(const std::string& key, const std::vector<long>& def);
  Block child(const std::string& key);
  /// Unchecked node; null when absent.
  YAML::Node raw(const std::string& key) { return get(key); }
  /// Items of a sequence of mappings; empty when the key is absent.
  std::vector<Block> list(const std::string& key);

  void finish() const;

 private:
  YAML::Node get(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

/// [re, im] or a plain number.
std::complex<double> parse_complex(const YAML::Node& n, const std::string& where);

struct ScenarioConfig {
  std::string name;
  YAML::Node input;    // scenario-specific, may be null
  YAML::Node numeric;  // tolerances, quadrature orders, schedules
  Tolerances tol;
  std::filesystem::path base_dir;  // relative paths in the input block resolve here
  std::filesystem::path out_dir;
};

struct Config {
  int schema_version = kSchemaVersion;
  Tolerances tol;
  std::filesystem::path base_dir;
  std::map<std::string, YAML::Node> scenarios;

  /// Throws ConfigError on schema violations, including unknown scenario names.
  static Config load(const std::filesystem::path& file);
  static Config parse(const std::string& yaml, const std::filesystem::path& base_dir = ".");
  static Config defaults();

  ScenarioConfig scenario(const std::string& name, const std::filesystem::path& out_dir) const;
};

}  // namespace dtrans::verify
