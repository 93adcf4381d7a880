#include "dtrans/verify/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dtrans/verify/scenarios.hpp"

namespace dtrans::verify {

namespace {

template <class T>
T scalar_as(const YAML::Node& n, const std::string& where, const char* type) {
  if (!n.IsScalar()) throw ConfigError(where + ": expected " + type);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": expected " + type + ", got '" + n.Scalar() + "'");
  }
}

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

double finite(const YAML::Node& n, const std::string& where) {
  double v = scalar_as<double>(n, where, "a number");
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

Tolerances read_tolerances(Block b) {
  Tolerances t;
  t.quadrature = b.positive("quadrature", t.quadrature);
  t.log_singular = b.positive("log_singular", t.log_singular);
  t.extrapolation = b.positive("extrapolation", t.extrapolation);
  b.finish();
  return t;
}

}  // namespace

Block::Block(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
  if (present(node_) && !node_.IsMap()) throw ConfigError(path_ + ": expected a mapping");
}

bool Block::has(const std::string& key) const {
  if (!present(node_) || !node_.IsMap()) return false;
  const YAML::Node& n = node_;
  return present(n[key]);
}

YAML::Node Block::get(const std::string& key) {
  used_.insert(key);
  if (!has(key)) return YAML::Node();
  const YAML::Node& n = node_;
  return n[key];
}

void Block::fail(const std::string& key, const std::string& what) const {
  throw ConfigError(path_ + "." + key + ": " + what);
}

double Block::real(const std::string& key, double def) {
  auto n = get(key);
  return present(n) ? finite(n, path_ + "." + key) : def;
}

double Block::positive(const std::string& key, double def) {
  double v = real(key, def);
  if (!(v > 0)) fail(key, "must be positive");
  return v;
}

long Block::integer(const std::string& key, long def, long min) {
  auto n = get(key);
  long v = present(n) ? scalar_as<long>(n, path_ + "." + key, "an integer") : def;
  if (v < min) fail(key, "must be at least " + std::to_string(min));
  return v;
}

std::string Block::text(const std::string& key, const std::string& def) {
  auto n = get(key);
  return present(n) ? scalar_as<std::string>(n, path_ + "." + key, "a string") : def;
}

std::complex<double> Block::complex(const std::string& key, std::complex<double> def) {
  auto n = get(key);
  return present(n) ? parse_complex(n, path_ + "." + key) : def;
}

std::vector<double> Block::reals(const std::string& key, const std::vector<double>& def) {
  auto n = get(key);
  if (!present(n)) return def;
  if (!n.IsSequence()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(finite(n[i], path_ + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> Block::texts(const std::string& key, const std::vector<std::string>& def) {
  auto n = get(key);
  if (!present(n)) return def;
  if (!n.IsSequence()) fail(key, "expected a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(scalar_as<std::string>(n[i], path_ + "." + key + "[" + std::to_string(i) + "]", "a string"));
  return out;
}

std::vector<long> Block::integers(const std::string& key, const std::vector<long>& def) {
  auto n = get(key);
  if (!present(n)) return def;
  if (!n.IsSequence()) fail(key, "expected a list of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(scalar_as<long>(n[i], path_ + "." + key + "[" + std::to_string(i) + "]", "an integer"));
  return out;
}

Block Block::child(const std::string& key) { return Block(get(key), path_ + "." + key); }

std::vector<Block> Block::list(const std::string& key) {
  auto n = get(key);
  std::vector<Block> out;
  if (!present(n)) return out;
  if (!n.IsSequence()) fail(key, "expected a list");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!n[i].IsMap()) fail(key + "[" + std::to_string(i) + "]", "expected a mapping");
    out.emplace_back(n[i], path_ + "." + key + "[" + std::to_string(i) + "]");
  }
  return out;
}

void Block::finish() const {
  if (!present(node_) || !node_.IsMap()) return;
  for (const auto& kv : node_) {
    auto key = kv.first.as<std::string>();
    if (!used_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
  }
}

std::complex<double> parse_complex(const YAML::Node& n, const std::string& where) {
  if (n.IsScalar()) return finite(n, where);
  if (n.IsSequence() && n.size() == 2) return {finite(n[0], where + "[0]"), finite(n[1], where + "[1]")};
  throw ConfigError(where + ": expected a number or [re, im]");
}

Config Config::parse(const std::string& yaml, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config c;
  c.base_dir = base_dir;
  if (!root || root.IsNull()) throw ConfigError("config: empty document");
  Block top(root, "config");
  c.schema_version = static_cast<int>(top.integer("schema_version", -1, -1));
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("config.schema_version: expected " + std::to_string(kSchemaVersion));
  c.tol = read_tolerances(top.child("tolerances"));
  Block sc = top.child("scenarios");
  for (const auto& name : list_scenarios()) {
    if (!sc.has(name)) continue;
    Block s = sc.child(name);
    s.child("input");
    s.child("numeric");
    s.finish();
    c.scenarios[name] = root["scenarios"][name];
  }
  sc.finish();
  top.finish();
  for (const auto& name : list_scenarios()) validate(c.scenario(name, "."));
  return c;
}

Config Config::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = file.parent_path();
  return parse(ss.str(), dir.empty() ? std::filesystem::path(".") : dir);
}

Config Config::defaults() {
  Config c;
  c.base_dir = ".";
  return c;
}

ScenarioConfig Config::scenario(const std::string& name, const std::filesystem::path& out_dir) const {
  if (!known_scenario(name)) throw ConfigError("unknown scenario '" + name + "'");
  ScenarioConfig s;
  s.name = name;
  s.tol = tol;
  s.base_dir = base_dir;
  s.out_dir = out_dir;
  auto it = scenarios.find(name);
  if (it != scenarios.end() && it->second.IsMap()) {
    const YAML::Node& n = it->second;
    if (present(n["input"])) s.input = n["input"];
    if (present(n["numeric"])) s.numeric = n["numeric"];
  }
  return s;
}

}  // namespace dtrans::verify
