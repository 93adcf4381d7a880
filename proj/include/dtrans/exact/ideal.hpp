#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtrans/exact/groebner.hpp"

namespace dtrans::exact {

/// Polynomial ideal given by generators. Reduced bases are memoized per
/// monomial order; the memo is shared between copies and safe to read from
/// several threads.
class Ideal {
 public:
  Ideal(VarList vars, std::vector<Polynomial> generators);

  static Ideal zero(VarList vars) { return Ideal(std::move(vars), {}); }
  static Ideal unit(VarList vars);
  /// m^n for the maximal ideal at the origin.
  static Ideal maximal_power(VarList vars, unsigned n);

  const VarList& vars() const { return vars_; }
  const std::vector<Polynomial>& generators() const { return gens_; }

  const std::vector<Polynomial>& basis(const MonomialOrder& order) const;

  bool contains(const Polynomial& f) const;
  bool contains(const Ideal& other) const;
  bool is_unit() const;
  bool is_zero() const;

  Polynomial reduce(const Polynomial& f, const MonomialOrder& order = MonomialOrder::grevlex()) const;

  Ideal operator+(const Ideal& o) const;
  Ideal operator*(const Ideal& o) const;
  Ideal pow(unsigned n) const;

  /// Same ideal expressed in a larger variable list (matched by name).
  Ideal embed(const VarList& target) const;

  friend bool operator==(const Ideal& a, const Ideal& b) { return a.contains(b) && b.contains(a); }
  friend bool operator!=(const Ideal& a, const Ideal& b) { return !(a == b); }

  std::string str() const;

 private:
  struct Cache {
    std::mutex mu;
    std::unordered_map<std::string, std::shared_ptr<const std::vector<Polynomial>>> bases;
  };

  VarList vars_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_;
};

struct SaturationLimits {
  unsigned max_rounds = 32;
  std::uint64_t max_degree = 64;
};

/// I ∩ k[remaining variables], via a block elimination order.
Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& drop_vars);
/// I : f^∞ by the auxiliary-variable method; throws std::runtime_error if
/// the caps are exceeded.
Ideal saturate(const Ideal& ideal, const Polynomial& f, const SaturationLimits& limits = {});
/// I : J^∞ as the intersection of the saturations by each generator of J.
Ideal saturate(const Ideal& ideal, const Ideal& by, const SaturationLimits& limits = {});
Ideal intersect(const Ideal& a, const Ideal& b);
/// I : f.
Ideal quotient(const Ideal& ideal, const Polynomial& f);

/// Dimension of k[x]/I as a vector space; nullopt when infinite.
std::optional<std::uint64_t> colength(const Ideal& ideal);

/// Krull dimension of k[x]/I from the leading-term ideal; -1 for the unit ideal.
int krull_dimension(const Ideal& ideal);

}  // namespace dtrans::exact
