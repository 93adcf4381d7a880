#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dtrans/exact/gauss_rational.hpp"
#include "dtrans/exact/monomial_order.hpp"

namespace dtrans::exact {

using VarList = std::shared_ptr<const std::vector<std::string>>;

VarList make_vars(std::vector<std::string> names);
bool same_vars(const VarList& a, const VarList& b);

/// Sparse multivariate polynomial over Q(i). Terms are stored in a map keyed
/// by exponent vector; zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, GaussRational>;

  explicit Polynomial(VarList vars);
  Polynomial(VarList vars, TermMap terms);

  static Polynomial constant(VarList vars, const GaussRational& c);
  static Polynomial variable(VarList vars, std::string_view name);
  static Polynomial variable(VarList vars, std::size_t index);
  static Polynomial monomial(VarList vars, Exponents e, GaussRational c = 1);

  const VarList& vars() const { return vars_; }
  std::size_t nvars() const { return vars_->size(); }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::uint64_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }

  /// Leading exponent and coefficient under `order`. Requires nonzero.
  const Exponents& leading_exponents(const MonomialOrder& order) const;
  const GaussRational& leading_coefficient(const MonomialOrder& order) const;
  /// Scaled so the leading coefficient is 1 (zero stays zero).
  Polynomial monic(const MonomialOrder& order) const;

  GaussRational coefficient(const Exponents& e) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const GaussRational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const GaussRational& c) { return a *= c; }
  friend Polynomial operator*(const GaussRational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(const Polynomial& a);

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(unsigned n) const;
  Polynomial mul_monomial(const Exponents& e, const GaussRational& c) const;

  GaussRational evaluate(const std::vector<GaussRational>& point) const;
  std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const;

  /// Replace variable j by images[j]; all images share one target variable list.
  Polynomial substitute(const std::vector<Polynomial>& images) const;
  /// Re-express in a variable list containing every variable that occurs here
  /// (matched by name).
  Polynomial embed(const VarList& target) const;

  /// Canonical text (descending grevlex term order).
  std::string str() const;

 private:
  void require_same_vars(const Polynomial& o) const;

  VarList vars_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// Parses the canonical grammar against a fixed variable list.
Polynomial parse_polynomial(std::string_view text, const VarList& vars);
/// Parses and infers variables in order of first appearance.
Polynomial parse_polynomial(std::string_view text);

}  // namespace dtrans::exact
