#include "dtrans/exact/monomial_order.hpp"

#include <algorithm>
#include <stdexcept>

namespace dtrans::exact {

std::uint64_t total_degree(const Exponents& e) {
  std::uint64_t d = 0;
  for (auto x : e) d += x;
  return d;
}

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exponents exp_mul(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t s = std::uint64_t(a[i]) + b[i];
    if (s > kMaxExponent) throw std::overflow_error("exponent overflow");
    r[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

Exponents exp_div(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Exponents exp_lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) return false;
  return true;
}

namespace {

// grevlex restricted to [lo, hi)
int grevlex_range(const Exponents& a, const Exponents& b, std::size_t lo, std::size_t hi) {
  std::uint64_t da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace

MonomialOrder MonomialOrder::block_elimination(std::size_t front_block) {
  MonomialOrder o(Kind::BlockElimination);
  o.front_block_ = front_block;
  return o;
}

MonomialOrder MonomialOrder::weighted(std::vector<std::uint32_t> weights) {
  MonomialOrder o(Kind::WeightedGraded);
  o.weights_ = std::move(weights);
  return o;
}

int MonomialOrder::compare(const Exponents& a, const Exponents& b) const {
  switch (kind_) {
    case Kind::Lex:
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    case Kind::GrevLex:
      return grevlex_range(a, b, 0, a.size());
    case Kind::BlockElimination: {
      std::size_t k = std::min(front_block_, a.size());
      if (int c = grevlex_range(a, b, 0, k)) return c;
      return grevlex_range(a, b, k, a.size());
    }
    case Kind::WeightedGraded: {
      std::uint64_t wa = 0, wb = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t w = i < weights_.size() ? weights_[i] : 0;
        wa += w * a[i];
        wb += w * b[i];
      }
      if (wa != wb) return wa < wb ? -1 : 1;
      return grevlex_range(a, b, 0, a.size());
    }
  }
  return 0;
}

std::string MonomialOrder::key() const {
  switch (kind_) {
    case Kind::Lex:
      return "lex";
    case Kind::GrevLex:
      return "grevlex";
    case Kind::BlockElimination:
      return "block:" + std::to_string(front_block_);
    case Kind::WeightedGraded: {
      std::string s = "weighted:";
      for (auto w : weights_) s += std::to_string(w) + ",";
      return s;
    }
  }
  return {};
}

}  // namespace dtrans::exact
