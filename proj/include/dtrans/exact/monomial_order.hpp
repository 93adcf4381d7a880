#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dtrans::exact {

using Exponents = std::vector<std::uint32_t>;

/// Hard cap on any single exponent or total degree produced by arithmetic.
inline constexpr std::uint64_t kMaxExponent = 1u << 20;

std::uint64_t total_degree(const Exponents& e);
bool divides(const Exponents& a, const Exponents& b);
Exponents exp_mul(const Exponents& a, const Exponents& b);
Exponents exp_div(const Exponents& a, const Exponents& b);  // requires divides(b, a)
Exponents exp_lcm(const Exponents& a, const Exponents& b);
bool coprime(const Exponents& a, const Exponents& b);

class MonomialOrder {
 public:
  enum class Kind { Lex, GrevLex, BlockElimination, WeightedGraded };

  static MonomialOrder lex() { return MonomialOrder(Kind::Lex); }
  static MonomialOrder grevlex() { return MonomialOrder(Kind::GrevLex); }
  /// The first `front_block` variables are eliminated: any monomial involving
  /// them is larger than every monomial free of them.
  static MonomialOrder block_elimination(std::size_t front_block);
  /// Weight first (nonnegative weights), ties broken by grevlex.
  static MonomialOrder weighted(std::vector<std::uint32_t> weights);

  Kind kind() const { return kind_; }
  std::size_t front_block() const { return front_block_; }
  const std::vector<std::uint32_t>& weights() const { return weights_; }

  /// Three-way comparison: negative, zero or positive.
  int compare(const Exponents& a, const Exponents& b) const;
  bool less(const Exponents& a, const Exponents& b) const { return compare(a, b) < 0; }

  /// Stable key used by basis caches.
  std::string key() const;

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) { return a.key() == b.key(); }

 private:
  explicit MonomialOrder(Kind k) : kind_(k) {}
  Kind kind_;
  std::size_t front_block_ = 0;
  std::vector<std::uint32_t> weights_;
};

}  // namespace dtrans::exact
