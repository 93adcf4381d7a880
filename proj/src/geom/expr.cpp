#include "dtrans/geom/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dtrans::geom {

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;
using Op = Expr::Op;

Expr make(Op op, cplx c = 0, std::size_t var = 0, int n = 0, NodeP a = nullptr, NodeP b = nullptr) {
  return Expr(std::make_shared<Expr::Node>(Expr::Node{op, c, var, n, std::move(a), std::move(b)}));
}

Expr wrap(const NodeP& p) { return Expr(p); }

cplx ipow(cplx a, int n) {
  bool inv = n < 0;
  unsigned m = inv ? -n : n;
  cplx r = 1;
  while (m) {
    if (m & 1) r *= a;
    a *= a;
    m >>= 1;
  }
  return inv ? 1.0 / r : r;
}

using Memo = std::unordered_map<const Expr::Node*, Expr>;

// Rebuilds a node from transformed children.
Expr rebuild(const Expr::Node& n, const Expr& a, const Expr& b) {
  switch (n.op) {
    case Op::Add: return a + b;
    case Op::Mul: return a * b;
    case Op::Pow: return pow(a, n.n);
    case Op::Exp: return exp(a);
    case Op::Log: return log(a);
    default: throw std::logic_error("rebuild of leaf");
  }
}

Expr transform(const NodeP& p, Memo& memo, const std::function<Expr(const Expr::Node&)>& leaf) {
  auto it = memo.find(p.get());
  if (it != memo.end()) return it->second;
  Expr out;
  if (p->op == Op::Const || p->op == Op::Z || p->op == Op::ZB)
    out = leaf(*p);
  else
    out = rebuild(*p, transform(p->a, memo, leaf), p->b ? transform(p->b, memo, leaf) : Expr());
  memo.emplace(p.get(), out);
  return out;
}

Expr diff_rec(const NodeP& p, std::size_t k, bool bar, Memo& memo) {
  auto it = memo.find(p.get());
  if (it != memo.end()) return it->second;
  Expr out;
  const auto& n = *p;
  switch (n.op) {
    case Op::Const: out = Expr(); break;
    case Op::Z: out = Expr((!bar && n.var == k) ? 1.0 : 0.0); break;
    case Op::ZB: out = Expr((bar && n.var == k) ? 1.0 : 0.0); break;
    case Op::Add: out = diff_rec(n.a, k, bar, memo) + diff_rec(n.b, k, bar, memo); break;
    case Op::Mul: out = diff_rec(n.a, k, bar, memo) * wrap(n.b) + wrap(n.a) * diff_rec(n.b, k, bar, memo); break;
    case Op::Pow: out = Expr(double(n.n)) * pow(wrap(n.a), n.n - 1) * diff_rec(n.a, k, bar, memo); break;
    case Op::Exp: out = wrap(p) * diff_rec(n.a, k, bar, memo); break;
    case Op::Log: out = diff_rec(n.a, k, bar, memo) * pow(wrap(n.a), -1); break;
  }
  memo.emplace(p.get(), out);
  return out;
}

std::size_t arity_rec(const NodeP& p, std::unordered_map<const Expr::Node*, std::size_t>& memo) {
  if (!p) return 0;
  auto it = memo.find(p.get());
  if (it != memo.end()) return it->second;
  std::size_t r = 0;
  if (p->op == Op::Z || p->op == Op::ZB)
    r = p->var + 1;
  else
    r = std::max(arity_rec(p->a, memo), arity_rec(p->b, memo));
  memo.emplace(p.get(), r);
  return r;
}

cplx eval_rec(const Expr::Node& n, std::span<const cplx> z) {
  switch (n.op) {
    case Op::Const: return n.c;
    case Op::Z: return z[n.var];
    case Op::ZB: return std::conj(z[n.var]);
    case Op::Add: return eval_rec(*n.a, z) + eval_rec(*n.b, z);
    case Op::Mul: return eval_rec(*n.a, z) * eval_rec(*n.b, z);
    case Op::Pow: return ipow(eval_rec(*n.a, z), n.n);
    case Op::Exp: return std::exp(eval_rec(*n.a, z));
    case Op::Log: return std::log(eval_rec(*n.a, z));
  }
  return 0;
}

std::string cstr(cplx c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0)
    os << c.real();
  else if (c.real() == 0)
    os << c.imag() << "*i";
  else
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "*i)";
  return os.str();
}

void str_rec(const Expr::Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Const: os << cstr(n.c); break;
    case Op::Z: os << "z" << n.var + 1; break;
    case Op::ZB: os << "zb" << n.var + 1; break;
    case Op::Add:
      os << "(";
      str_rec(*n.a, os);
      os << " + ";
      str_rec(*n.b, os);
      os << ")";
      break;
    case Op::Mul:
      str_rec(*n.a, os);
      os << "*";
      str_rec(*n.b, os);
      break;
    case Op::Pow:
      os << "(";
      str_rec(*n.a, os);
      os << ")^" << (n.n < 0 ? "(" : "") << n.n << (n.n < 0 ? ")" : "");
      break;
    case Op::Exp:
    case Op::Log:
      os << (n.op == Op::Exp ? "exp(" : "log(");
      str_rec(*n.a, os);
      os << ")";
      break;
  }
}

}  // namespace

Expr::Expr() : Expr(cplx(0)) {}
Expr::Expr(double c) : Expr(cplx(c)) {}
Expr::Expr(cplx c) : node_(std::make_shared<Node>(Node{Op::Const, c, 0, 0, nullptr, nullptr})) {}

Expr Expr::z(std::size_t k) { return make(Op::Z, 0, k); }
Expr Expr::zb(std::size_t k) { return make(Op::ZB, 0, k); }

Expr::Op Expr::op() const { return node_->op; }
bool Expr::is_const() const { return node_->op == Op::Const; }
bool Expr::is_zero() const { return is_const() && node_->c == cplx(0); }
cplx Expr::value() const {
  if (!is_const()) throw std::logic_error("value() of non-constant expression");
  return node_->c;
}

std::size_t Expr::arity() const {
  std::unordered_map<const Node*, std::size_t> memo;
  return arity_rec(node_, memo);
}

cplx Expr::eval(std::span<const cplx> z) const {
  if (z.size() < arity()) throw std::invalid_argument("Expr::eval: too few coordinates");
  return eval_rec(*node_, z);
}

Expr Expr::diff(std::size_t k, bool bar) const {
  Memo memo;
  return diff_rec(node_, k, bar, memo);
}

Expr Expr::conj() const {
  Memo memo;
  return transform(node_, memo, [](const Node& n) {
    if (n.op == Op::Const) return Expr(std::conj(n.c));
    return n.op == Op::Z ? Expr::zb(n.var) : Expr::z(n.var);
  });
}

Expr Expr::substitute(const std::vector<Expr>& images) const {
  std::vector<Expr> bars;
  for (const auto& e : images) bars.push_back(e.conj());
  Memo memo;
  return transform(node_, memo, [&](const Node& n) {
    if (n.op == Op::Const) return Expr(n.c);
    if (n.var >= images.size()) throw std::invalid_argument("substitute: missing image for variable");
    return n.op == Op::Z ? images[n.var] : bars[n.var];
  });
}

Expr Expr::shift(std::size_t offset) const {
  Memo memo;
  return transform(node_, memo, [&](const Node& n) {
    if (n.op == Op::Const) return Expr(n.c);
    return n.op == Op::Z ? Expr::z(n.var + offset) : Expr::zb(n.var + offset);
  });
}

std::string Expr::str() const {
  std::ostringstream os;
  str_rec(*node_, os);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return make(Op::Add, 0, 0, 0, a.node(), b.node());
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_const() && a.value() == cplx(1)) return b;
  if (b.is_const() && b.value() == cplx(1)) return a;
  if (b.is_const()) return make(Op::Mul, 0, 0, 0, b.node(), a.node());
  // c1 * (c2 * x) -> (c1 c2) * x
  if (a.is_const() && b.op() == Op::Mul && b.node()->a->op == Op::Const)
    return Expr(a.value() * b.node()->a->c) * Expr(b.node()->b);
  return make(Op::Mul, 0, 0, 0, a.node(), b.node());
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw std::domain_error("Expr: division by zero constant");
  return a * pow(b, -1);
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr(1.0);
  if (n == 1) return a;
  if (a.is_const()) {
    if (a.is_zero() && n < 0) throw std::domain_error("Expr: negative power of zero");
    return Expr(ipow(a.value(), n));
  }
  if (a.op() == Op::Pow) return pow(Expr(a.node()->a), a.node()->n * n);
  return make(Op::Pow, 0, 0, n, a.node());
}

Expr exp(const Expr& a) {
  if (a.is_const()) return Expr(std::exp(a.value()));
  return make(Op::Exp, 0, 0, 0, a.node());
}

Expr log(const Expr& a) {
  if (a.is_const()) {
    if (a.is_zero()) throw std::domain_error("Expr: log of zero");
    return Expr(std::log(a.value()));
  }
  return make(Op::Log, 0, 0, 0, a.node());
}

// ---- parser

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& names) : s_(s) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& nm = names[k];
      if (nm.empty() || !std::isalpha(static_cast<unsigned char>(nm[0])))
        throw std::invalid_argument("parse_expr: bad variable name '" + nm + "'");
      std::size_t d = nm.size();
      while (d > 0 && std::isdigit(static_cast<unsigned char>(nm[d - 1]))) --d;
      vars_[nm] = Expr::z(k);
      vars_[nm.substr(0, d) + "b" + nm.substr(d)] = Expr::zb(k);
    }
  }

  Expr run() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const {
    throw std::invalid_argument("parse_expr: " + m + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || c == '.' || std::isalnum(static_cast<unsigned char>(c));
  }

  Expr sum() {
    Expr e = term();
    for (;;) {
      if (eat('+'))
        e = e + term();
      else if (eat('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (eat('*'))
        e = e * unary();
      else if (eat('/'))
        e = e / unary();
      else if (starts_factor())
        e = e * power();
      else
        return e;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      if (eat('(')) {
        neg = eat('-') != neg;
        int n = integer();
        if (!eat(')')) fail("expected ')'");
        return pow(b, neg ? -n : n);
      }
      int n = integer();
      return pow(b, neg ? -n : n);
    }
    return b;
  }

  int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return Expr(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "exp" || id == "log" || id == "conj" || id == "abs2") {
        if (!eat('(')) fail("expected '(' after " + id);
        Expr a = sum();
        if (!eat(')')) fail("expected ')'");
        if (id == "exp") return exp(a);
        if (id == "log") return log(a);
        if (id == "conj") return a.conj();
        return abs2(a);
      }
      auto it = vars_.find(id);
      if (it != vars_.end()) return it->second;
      if (id == "i") return Expr(cplx(0, 1));
      if (id == "pi") return Expr(std::numbers::pi);
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, Expr> vars_;
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& names) { return Parser(text, names).run(); }

Expr parse_expr(const std::string& text, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= n; ++k) names.push_back("z" + std::to_string(k));
  if (n == 1) {
    try {
      return parse_expr(text, std::vector<std::string>{"z"});
    } catch (const std::invalid_argument&) {
    }
  }
  return parse_expr(text, names);
}

// ---- tape

Tape::Tape(const std::vector<Expr>& outputs) {
  std::unordered_map<const Expr::Node*, std::size_t> slot;
  std::function<std::size_t(const NodeP&)> emit = [&](const NodeP& p) -> std::size_t {
    auto it = slot.find(p.get());
    if (it != slot.end()) return it->second;
    std::size_t a = p->a ? emit(p->a) : 0;
    std::size_t b = p->b ? emit(p->b) : 0;
    code_.push_back({p->op, p->c, p->var, p->n, a, b});
    slot.emplace(p.get(), code_.size() - 1);
    return code_.size() - 1;
  };
  for (const auto& e : outputs) outputs_.push_back(emit(e.node()));
}

std::vector<cplx> Tape::eval(std::span<const cplx> z) const {
  std::vector<cplx> v(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const auto& in = code_[i];
    switch (in.op) {
      case Op::Const: v[i] = in.c; break;
      case Op::Z:
      case Op::ZB:
        if (in.var >= z.size()) throw std::invalid_argument("Tape::eval: too few coordinates");
        v[i] = in.op == Op::Z ? z[in.var] : std::conj(z[in.var]);
        break;
      case Op::Add: v[i] = v[in.a] + v[in.b]; break;
      case Op::Mul: v[i] = v[in.a] * v[in.b]; break;
      case Op::Pow: v[i] = ipow(v[in.a], in.n); break;
      case Op::Exp: v[i] = std::exp(v[in.a]); break;
      case Op::Log: v[i] = std::log(v[in.a]); break;
    }
  }
  std::vector<cplx> out;
  out.reserve(outputs_.size());
  for (auto k : outputs_) out.push_back(v[k]);
  return out;
}

}  // namespace dtrans::geom
