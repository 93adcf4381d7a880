#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dtrans::geom {

using cplx = std::complex<double>;

/// Expressions in z_k and zb_k, the latter standing for conj(z_k). The two
/// are independent for differentiation (Wirtinger calculus) and tied only at
/// evaluation time.
class Expr {
 public:
  enum class Op { Const, Z, ZB, Add, Mul, Pow, Exp, Log };
  struct Node;

  Expr();  // zero
  Expr(double c);
  Expr(cplx c);

  static Expr z(std::size_t k);
  static Expr zb(std::size_t k);

  Op op() const;
  bool is_const() const;
  bool is_zero() const;
  cplx value() const;  // for constants
  /// 1 + largest variable index appearing, 0 for constants.
  std::size_t arity() const;

  cplx eval(std::span<const cplx> z) const;
  /// d/dz_k, or d/dzb_k when `bar`.
  Expr diff(std::size_t k, bool bar = false) const;
  Expr conj() const;
  /// z_k -> images[k], zb_k -> conj(images[k]).
  Expr substitute(const std::vector<Expr>& images) const;
  /// Variable k becomes k + offset.
  Expr shift(std::size_t offset) const;

  std::string str() const;

  const std::shared_ptr<const Node>& node() const { return node_; }
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Op op;
  cplx c{};
  std::size_t var = 0;
  int n = 0;
  std::shared_ptr<const Node> a, b;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator-(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& a, int n);
Expr exp(const Expr& a);
Expr log(const Expr& a);
inline Expr conj(const Expr& a) { return a.conj(); }
/// a * conj(a).
inline Expr abs2(const Expr& a) { return a * a.conj(); }

/// Grammar: numbers, i, pi, the names given (and their conjugates, formed by
/// inserting 'b' before the trailing digits: z1 -> zb1, z -> zb), + - * / ^
/// with integer exponents, implicit multiplication, exp log conj abs2.
Expr parse_expr(const std::string& text, const std::vector<std::string>& names);
/// names z1..zn, plus z when n == 1.
Expr parse_expr(const std::string& text, std::size_t n);

/// Linearized DAG of several expressions; shared subtrees are evaluated once.
class Tape {
 public:
  explicit Tape(const std::vector<Expr>& outputs);
  std::size_t size() const { return outputs_.size(); }
  std::vector<cplx> eval(std::span<const cplx> z) const;

 private:
  struct Instr {
    Expr::Op op;
    cplx c;
    std::size_t var;
    int n;
    std::size_t a, b;
  };
  std::vector<Instr> code_;
  std::vector<std::size_t> outputs_;
};

}  // namespace dtrans::geom
