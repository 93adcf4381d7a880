#include "dtrans/exact/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dtrans::exact {

VarList make_vars(std::vector<std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& n = names[i];
    if (n.empty() || n == "i" || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
      throw std::invalid_argument("invalid variable name '" + n + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (names[j] == n) throw std::invalid_argument("duplicate variable name '" + n + "'");
  }
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

bool same_vars(const VarList& a, const VarList& b) { return a == b || *a == *b; }

Polynomial::Polynomial(VarList vars) : vars_(std::move(vars)) {}

Polynomial::Polynomial(VarList vars, TermMap terms) : vars_(std::move(vars)) {
  for (auto& [e, c] : terms) {
    if (e.size() != vars_->size()) throw std::invalid_argument("exponent length mismatch");
    if (!c.is_zero()) terms_.emplace(e, c);
  }
}

Polynomial Polynomial::constant(VarList vars, const GaussRational& c) {
  Polynomial p(std::move(vars));
  if (!c.is_zero()) p.terms_.emplace(Exponents(p.nvars(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarList vars, std::string_view name) {
  auto it = std::find(vars->begin(), vars->end(), name);
  if (it == vars->end()) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return variable(vars, static_cast<std::size_t>(it - vars->begin()));
}

Polynomial Polynomial::variable(VarList vars, std::size_t index) {
  Exponents e(vars->size(), 0);
  e.at(index) = 1;
  return monomial(std::move(vars), std::move(e));
}

Polynomial Polynomial::monomial(VarList vars, Exponents e, GaussRational c) {
  Polynomial p(std::move(vars));
  if (e.size() != p.nvars()) throw std::invalid_argument("exponent length mismatch");
  if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && dtrans::exact::total_degree(terms_.begin()->first) == 0;
}

std::uint64_t Polynomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, dtrans::exact::total_degree(e));
  return d;
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

const Exponents& Polynomial::leading_exponents(const MonomialOrder& order) const {
  if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = std::next(best); it != terms_.end(); ++it)
    if (order.compare(it->first, best->first) > 0) best = it;
  return best->first;
}

const GaussRational& Polynomial::leading_coefficient(const MonomialOrder& order) const {
  return terms_.at(leading_exponents(order));
}

Polynomial Polynomial::monic(const MonomialOrder& order) const {
  if (is_zero()) return *this;
  return *this * leading_coefficient(order).inverse();
}

GaussRational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussRational{} : it->second;
}

void Polynomial::require_same_vars(const Polynomial& o) const {
  if (!same_vars(vars_, o.vars_)) throw std::invalid_argument("polynomial variable-set mismatch");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_vars(b);
  Polynomial r(a.vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      auto e = exp_mul(ea, eb);
      auto prod = ca * cb;
      auto [it, inserted] = r.terms_.try_emplace(std::move(e), prod);
      if (!inserted) {
        it->second += prod;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const GaussRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial r = a;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return same_vars(a.vars_, b.vars_) && a.terms_ == b.terms_;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result = constant(vars_, 1);
  Polynomial base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Polynomial Polynomial::mul_monomial(const Exponents& e, const GaussRational& c) const {
  Polynomial r(vars_);
  if (c.is_zero()) return r;
  for (const auto& [ea, ca] : terms_) r.terms_.emplace(exp_mul(ea, e), ca * c);
  return r;
}

GaussRational Polynomial::evaluate(const std::vector<GaussRational>& point) const {
  if (point.size() != nvars()) throw std::invalid_argument("evaluation point dimension mismatch");
  GaussRational sum;
  for (const auto& [e, c] : terms_) {
    GaussRational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
    sum += t;
  }
  return sum;
}

std::complex<double> Polynomial::evaluate(const std::vector<std::complex<double>>& point) const {
  if (point.size() != nvars()) throw std::invalid_argument("evaluation point dimension mismatch");
  std::complex<double> sum = 0;
  for (const auto& [e, c] : terms_) {
    std::complex<double> t = c.to_complex();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= std::pow(point[i], static_cast<int>(e[i]));
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images) const {
  if (images.size() != nvars()) throw std::invalid_argument("substitution arity mismatch");
  if (images.empty()) throw std::invalid_argument("substitution into a polynomial without variables");
  const VarList& target = images.front().vars();
  for (const auto& im : images)
    if (!same_vars(im.vars(), target)) throw std::invalid_argument("substitution images use different variables");
  // cache powers per variable
  std::vector<std::vector<Polynomial>> powers(nvars());
  for (std::size_t i = 0; i < nvars(); ++i) {
    powers[i].push_back(constant(target, 1));
    for (std::uint32_t k = 1; k <= degree_in(i); ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  Polynomial result(target);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t = t * powers[i][e[i]];
    result += t;
  }
  return result;
}

Polynomial Polynomial::embed(const VarList& target) const {
  std::vector<std::size_t> map(nvars());
  for (std::size_t i = 0; i < nvars(); ++i) {
    auto it = std::find(target->begin(), target->end(), (*vars_)[i]);
    if (it == target->end()) {
      if (degree_in(i) == 0) {
        map[i] = target->size();  // unused variable, dropped
        continue;
      }
      throw std::invalid_argument("embed: variable '" + (*vars_)[i] + "' missing from target");
    }
    map[i] = static_cast<std::size_t>(it - target->begin());
  }
  Polynomial r(target);
  for (const auto& [e, c] : terms_) {
    Exponents t(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t[map[i]] = e[i];
    r.terms_.emplace(std::move(t), c);
  }
  return r;
}

namespace {

std::string monomial_text(const Exponents& e, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> sorted;
  for (const auto& t : terms_) sorted.push_back(&t);
  auto order = MonomialOrder::grevlex();
  std::sort(sorted.begin(), sorted.end(),
            [&](auto* a, auto* b) { return order.compare(a->first, b->first) > 0; });
  std::string out;
  bool first = true;
  for (const auto* t : sorted) {
    const auto& [e, c] = *t;
    std::string mono = monomial_text(e, *vars_);
    bool negative = c.is_real() && sgn(c.re()) < 0;
    GaussRational shown = negative ? -c : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += shown.str();
    } else if (shown.is_one()) {
      out += mono;
    } else {
      out += shown.str() + "*" + mono;
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

namespace {

struct ParsedTerm {
  std::map<std::string, std::uint32_t> powers;
  GaussRational coeff{1};
};

class Parser {
 public:
  explicit Parser(std::string_view t) : text_(t) {}

  std::vector<ParsedTerm> parse_all() {
    std::vector<ParsedTerm> terms;
    skip();
    if (at_end()) throw error("empty polynomial");
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = get() == '-';
    }
    while (true) {
      ParsedTerm t = parse_term();
      if (negate) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
      skip();
      if (at_end()) break;
      char c = get();
      if (c != '+' && c != '-') throw error(std::string("unexpected '") + c + "'");
      negate = c == '-';
    }
    return terms;
  }

  std::vector<std::string> names_in_order;

 private:
  std::runtime_error error(const std::string& msg) const {
    return std::runtime_error("polynomial parse error at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }

  mpz_class parse_integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw error("expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  mpq_class parse_rational() {
    mpq_class q(parse_integer());
    skip();
    if (!at_end() && peek() == '/') {
      ++pos_;
      mpz_class d = parse_integer();
      if (d == 0) throw error("zero denominator");
      q /= mpq_class(d);
    }
    q.canonicalize();
    return q;
  }

  std::string parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  GaussRational parse_gauss() {
    GaussRational sum;
    skip();
    bool negate = false;
    if (!at_end() && (peek() == '+' || peek() == '-')) negate = get() == '-';
    while (true) {
      skip();
      GaussRational part;
      if (!at_end() && peek() == 'i') {
        ++pos_;
        part = GaussRational::i();
      } else {
        part = GaussRational(parse_rational());
        skip();
        if (!at_end() && peek() == '*') {
          ++pos_;
          skip();
          if (at_end() || get() != 'i') throw error("expected 'i'");
          part *= GaussRational::i();
        }
      }
      sum += negate ? -part : part;
      skip();
      if (at_end()) throw error("unterminated coefficient");
      if (peek() == ')') {
        ++pos_;
        return sum;
      }
      char c = get();
      if (c != '+' && c != '-') throw error("bad complex coefficient");
      negate = c == '-';
    }
  }

  bool starts_factor() {
    skip();
    if (at_end()) return false;
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || std::isalpha(static_cast<unsigned char>(c)) ||
           c == '_';
  }

  ParsedTerm parse_term() {
    ParsedTerm t;
    bool any = false;
    while (true) {
      skip();
      if (any && !at_end() && peek() == '*') {
        ++pos_;
        if (!starts_factor()) throw error("dangling '*'");
      } else if (!starts_factor()) {
        break;
      }
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.coeff *= GaussRational(parse_rational());
      } else if (c == '(') {
        ++pos_;
        t.coeff *= parse_gauss();
      } else {
        std::string name = parse_ident();
        if (name == "i") {
          t.coeff *= GaussRational::i();
        } else {
          std::uint32_t power = 1;
          skip();
          if (!at_end() && peek() == '^') {
            ++pos_;
            mpz_class p = parse_integer();
            if (p > mpz_class(static_cast<unsigned long>(kMaxExponent))) throw error("exponent too large");
            power = static_cast<std::uint32_t>(p.get_ui());
          }
          if (std::find(names_in_order.begin(), names_in_order.end(), name) == names_in_order.end())
            names_in_order.push_back(name);
          t.powers[name] += power;
        }
      }
      any = true;
    }
    if (!any) throw error("expected term");
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Polynomial build(const std::vector<ParsedTerm>& terms, const VarList& vars) {
  Polynomial p(vars);
  for (const auto& t : terms) {
    Exponents e(vars->size(), 0);
    for (const auto& [name, pw] : t.powers) {
      auto it = std::find(vars->begin(), vars->end(), name);
      if (it == vars->end()) throw std::runtime_error("unknown variable '" + name + "'");
      e[static_cast<std::size_t>(it - vars->begin())] += pw;
    }
    p += Polynomial::monomial(vars, std::move(e), t.coeff);
  }
  return p;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VarList& vars) {
  Parser parser(text);
  return build(parser.parse_all(), vars);
}

Polynomial parse_polynomial(std::string_view text) {
  Parser parser(text);
  auto terms = parser.parse_all();
  return build(terms, make_vars(parser.names_in_order));
}

}  // namespace dtrans::exact
